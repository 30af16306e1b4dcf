#ifndef SPARSELDL_FACTORIZATION_HPP_
#define SPARSELDL_FACTORIZATION_HPP_

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sparseldl/block_diagonal.hpp"
#include "sparseldl/permutation.hpp"
#include "sparseldl/types.hpp"

namespace sparseldl {

// Unit lower triangular factor, stored by column. The implicit unit diagonal
// is not stored; every stored entry has row > column.
class SparseLowerTriangular {
 public:
  SparseLowerTriangular() = default;

  explicit SparseLowerTriangular(Index n) : n_(n), columns_(static_cast<std::size_t>(n)) {}

  Index dim() const { return n_; }

  // Stored entry count plus the implicit unit diagonal.
  std::int64_t nnz() const {
    std::int64_t count = n_;
    for (const auto& col : columns_) count += static_cast<std::int64_t>(col.size());
    return count;
  }

  const std::vector<Entry>& column(Index j) const { return columns_[j]; }

  // Appends entries to column j; rows must land strictly below the diagonal.
  void set_column(Index j, std::vector<Entry> entries) {
    for (const Entry& e : entries) {
      if (e.row <= j || e.row >= n_) {
        throw std::invalid_argument("lower triangular entry outside strict lower part");
      }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.row < b.row; });
    columns_[j] = std::move(entries);
  }

  Real value_at(Index i, Index j) const {
    if (i == j) return 1.0;
    const auto& col = columns_[j];
    auto it = std::lower_bound(col.begin(), col.end(), i,
                               [](const Entry& e, Index row) { return e.row < row; });
    if (it != col.end() && it->row == i) return it->value;
    return 0.0;
  }

  // x <- L x (unit diagonal applied implicitly).
  void multiply_in_place(std::vector<Real>& x) const {
    if (static_cast<Index>(x.size()) != n_) {
      throw DimensionMismatchError("SparseLowerTriangular::multiply_in_place: size mismatch");
    }
    for (Index j = n_ - 1; j >= 0; --j) {
      const Real xj = x[j];
      if (xj == 0.0) continue;
      for (const Entry& e : columns_[j]) x[e.row] += e.value * xj;
    }
  }

  // Solves L y = x in place (forward substitution).
  void solve_in_place(std::vector<Real>& x) const {
    if (static_cast<Index>(x.size()) != n_) {
      throw DimensionMismatchError("SparseLowerTriangular::solve_in_place: size mismatch");
    }
    for (Index j = 0; j < n_; ++j) {
      const Real xj = x[j];
      if (xj == 0.0) continue;
      for (const Entry& e : columns_[j]) x[e.row] -= e.value * xj;
    }
  }

  // Solves L^T y = x in place (backward substitution).
  void solve_transpose_in_place(std::vector<Real>& x) const {
    if (static_cast<Index>(x.size()) != n_) {
      throw DimensionMismatchError("SparseLowerTriangular::solve_transpose_in_place: size mismatch");
    }
    for (Index j = n_ - 1; j >= 0; --j) {
      Real sum = x[j];
      for (const Entry& e : columns_[j]) sum -= e.value * x[e.row];
      x[j] = sum;
    }
  }

  friend bool operator==(const SparseLowerTriangular&, const SparseLowerTriangular&) = default;

 private:
  Index n_ = 0;
  std::vector<std::vector<Entry>> columns_;
};

// Result of factorizing a symmetric matrix A: a permutation P, a unit lower
// triangular L, and a block diagonal B with P^T A P = L B L^T.
struct Factorization {
  Permutation perm;
  SparseLowerTriangular lower;
  BlockDiagonal blocks;

  Index dim() const { return lower.dim(); }
};

}  // namespace sparseldl

#endif  // SPARSELDL_FACTORIZATION_HPP_
