#ifndef SPARSELDL_BLOCK_DIAGONAL_HPP_
#define SPARSELDL_BLOCK_DIAGONAL_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sparseldl/types.hpp"

namespace sparseldl {

// One diagonal block of the factorization: either a scalar pivot or a
// symmetric 2x2 pivot. 2x2 blocks cache the reciprocal determinant so that
// repeated solves avoid the division.
struct Block {
  Index size = 1;       // 1 or 2
  Index offset = 0;     // position of the block's first row in the factor
  Real b11 = 0.0;
  Real b21 = 0.0;       // only meaningful when size == 2
  Real b22 = 0.0;       // only meaningful when size == 2
  Real inv_det = 0.0;   // cached 1 / (b11*b22 - b21*b21) for 2x2 blocks

  static Block scalar(Index offset, Real value) {
    Block b;
    b.size = 1;
    b.offset = offset;
    b.b11 = value;
    return b;
  }

  static Block two_by_two(Index offset, Real b11, Real b21, Real b22) {
    Block b;
    b.size = 2;
    b.offset = offset;
    b.b11 = b11;
    b.b21 = b21;
    b.b22 = b22;
    const Real det = b11 * b22 - b21 * b21;
    if (det == 0.0) throw SingularMatrixError("2x2 pivot block is singular");
    b.inv_det = 1.0 / det;
    return b;
  }

  friend bool operator==(const Block&, const Block&) = default;
};

// The block-diagonal middle factor B. Blocks are stored in elimination
// order; their offsets partition [0, n).
class BlockDiagonal {
 public:
  BlockDiagonal() = default;

  void push_scalar(Real value) {
    blocks_.push_back(Block::scalar(dim_, value));
    dim_ += 1;
  }

  void push_two_by_two(Real b11, Real b21, Real b22) {
    blocks_.push_back(Block::two_by_two(dim_, b11, b21, b22));
    dim_ += 2;
  }

  Index dim() const { return dim_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  const Block& block(std::size_t k) const { return blocks_[k]; }
  const std::vector<Block>& blocks() const { return blocks_; }

  // x <- B x.
  void apply_in_place(std::vector<Real>& x) const {
    if (static_cast<Index>(x.size()) != dim_) {
      throw DimensionMismatchError("BlockDiagonal::apply_in_place: size mismatch");
    }
    for (const Block& b : blocks_) {
      if (b.size == 1) {
        x[b.offset] *= b.b11;
      } else {
        const Real x1 = x[b.offset];
        const Real x2 = x[b.offset + 1];
        x[b.offset] = b.b11 * x1 + b.b21 * x2;
        x[b.offset + 1] = b.b21 * x1 + b.b22 * x2;
      }
    }
  }

  // x <- B^{-1} x. Scalar blocks divide; 2x2 blocks apply the adjugate
  // formula scaled by the cached reciprocal determinant.
  void solve_in_place(std::vector<Real>& x) const {
    if (static_cast<Index>(x.size()) != dim_) {
      throw DimensionMismatchError("BlockDiagonal::solve_in_place: size mismatch");
    }
    for (const Block& b : blocks_) {
      if (b.size == 1) {
        if (b.b11 == 0.0) throw SingularMatrixError("zero 1x1 pivot block");
        x[b.offset] /= b.b11;
      } else {
        const Real x1 = x[b.offset];
        const Real x2 = x[b.offset + 1];
        x[b.offset] = (b.b22 * x1 - b.b21 * x2) * b.inv_det;
        x[b.offset + 1] = (b.b11 * x2 - b.b21 * x1) * b.inv_det;
      }
    }
  }

  friend bool operator==(const BlockDiagonal&, const BlockDiagonal&) = default;

 private:
  Index dim_ = 0;
  std::vector<Block> blocks_;
};

}  // namespace sparseldl

#endif  // SPARSELDL_BLOCK_DIAGONAL_HPP_
