#ifndef SPARSELDL_MATGEN_HPP_
#define SPARSELDL_MATGEN_HPP_

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sparseldl/sparse_matrix.hpp"
#include "sparseldl/types.hpp"

namespace sparseldl {

// Recipe for a random symmetric test instance: `density` is the target
// fraction of stored nonzeros in the full n-by-n matrix. The diagonal is
// always fully populated and counts against the density budget; it draws
// values from the same distribution as the off-diagonals.
struct GenSpec {
  Index n = 100;
  Real density = 0.3;
  std::uint64_t seed = 0;
  Real value_min = -1.0;
  Real value_max = 1.0;

  void validate() const {
    if (n < 1) throw std::invalid_argument("GenSpec: n must be positive");
    if (!(density > 0.0) || density > 1.0) {
      throw std::invalid_argument("GenSpec: density must lie in (0, 1]");
    }
    if (!(value_min < value_max)) {
      throw std::invalid_argument("GenSpec: value range must be nonempty");
    }
  }
};

namespace internal {

// splitmix64 step, the standard 64-bit seed mixer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits of one draw. Hand-rolled
// (rather than std::uniform_real_distribution) so streams are identical
// across standard library implementations.
inline Real uniform01(std::mt19937_64& rng) {
  return static_cast<Real>(rng() >> 11) * 0x1.0p-53;
}

inline Real uniform_value(std::mt19937_64& rng, Real lo, Real hi) {
  // Redraw exact zeros: stored zeros are forbidden and a zero entry would
  // silently shrink the achieved density.
  for (;;) {
    const Real v = lo + uniform01(rng) * (hi - lo);
    if (v != 0.0) return v;
  }
}

}  // namespace internal

// Deterministic random symmetric matrix. The full diagonal is placed first
// (every column stays structurally covered, so instances are factorizable);
// the rest of the entry budget goes to off-diagonal pairs drawn uniformly
// among the strictly-upper cells via one shuffle. Each pair stores two
// entries, so the achieved count lands within one entry of
// round(density * n^2). Densities below n/n^2 are infeasible under the
// full-diagonal rule and round up to a diagonal-only matrix.
inline SymmetricSparseMatrix generate(const GenSpec& spec) {
  spec.validate();
  const Index n = spec.n;
  const std::int64_t target =
      std::llround(spec.density * static_cast<Real>(n) * static_cast<Real>(n));

  std::mt19937_64 rng(spec.seed);
  std::vector<Triplet> triplets;
  for (Index i = 0; i < n; ++i) {
    triplets.push_back({i, i, internal::uniform_value(rng, spec.value_min, spec.value_max)});
  }

  std::vector<std::pair<Index, Index>> cells;
  cells.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) cells.push_back({i, j});
  }
  // Fisher-Yates with a plain modulo draw; portable and deterministic.
  for (std::size_t k = cells.size(); k > 1; --k) {
    const std::size_t r = static_cast<std::size_t>(rng() % k);
    std::swap(cells[k - 1], cells[r]);
  }

  std::int64_t budget = target - n;
  for (const auto& [i, j] : cells) {
    if (budget < 2) break;
    const Real v = internal::uniform_value(rng, spec.value_min, spec.value_max);
    triplets.push_back({j, i, v});
    budget -= 2;
  }
  return SymmetricSparseMatrix::from_triplets(n, triplets);
}

// Per-instance seed for benchmark sweeps, derived from the base seed and
// the instance coordinates so any instance can be regenerated in isolation.
inline std::uint64_t instance_seed(std::uint64_t base, Index n, Real density, Index instance) {
  std::uint64_t h = internal::mix64(base);
  h = internal::mix64(h ^ static_cast<std::uint64_t>(n));
  h = internal::mix64(h ^ std::bit_cast<std::uint64_t>(density));
  h = internal::mix64(h ^ static_cast<std::uint64_t>(instance));
  return h;
}

}  // namespace sparseldl

#endif  // SPARSELDL_MATGEN_HPP_
