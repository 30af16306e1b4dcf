#ifndef SPARSELDL_PERMUTATION_HPP_
#define SPARSELDL_PERMUTATION_HPP_

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sparseldl/types.hpp"

namespace sparseldl {

// A bijection on [0, n). `forward` maps an original index to its permuted
// position; `inverse` maps a position back to the original index.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(Index n) {
    Permutation p;
    p.forward_.resize(static_cast<std::size_t>(n));
    p.inverse_.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
      p.forward_[i] = i;
      p.inverse_[i] = i;
    }
    return p;
  }

  static Permutation from_forward(std::vector<Index> forward) {
    Permutation p;
    p.inverse_ = invert(forward);
    p.forward_ = std::move(forward);
    return p;
  }

  static Permutation from_inverse(std::vector<Index> inverse) {
    Permutation p;
    p.forward_ = invert(inverse);
    p.inverse_ = std::move(inverse);
    return p;
  }

  Index dim() const { return static_cast<Index>(forward_.size()); }

  Index position(Index original) const { return forward_[original]; }
  Index original(Index position) const { return inverse_[position]; }

  const std::vector<Index>& forward() const { return forward_; }
  const std::vector<Index>& inverse() const { return inverse_; }

  Permutation inverted() const {
    Permutation p;
    p.forward_ = inverse_;
    p.inverse_ = forward_;
    return p;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  static std::vector<Index> invert(const std::vector<Index>& map) {
    const Index n = static_cast<Index>(map.size());
    std::vector<Index> out(map.size(), Index{-1});
    for (Index i = 0; i < n; ++i) {
      const Index target = map[i];
      if (target < 0 || target >= n || out[target] != -1) {
        throw std::invalid_argument("permutation: map is not a bijection");
      }
      out[target] = i;
    }
    return out;
  }

  std::vector<Index> forward_;
  std::vector<Index> inverse_;
};

}  // namespace sparseldl

#endif  // SPARSELDL_PERMUTATION_HPP_
