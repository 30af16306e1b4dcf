#ifndef SPARSELDL_TESTS_TEST_MATRICES_HPP_
#define SPARSELDL_TESTS_TEST_MATRICES_HPP_

// Small builders shared across the test binaries.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sparseldl/sparseldl.hpp"

namespace sparseldl::testing {

// Builds a SymmetricSparseMatrix from dense rows; the input must already be
// symmetric (test matrices are written out in full for readability).
inline SymmetricSparseMatrix from_dense(const std::vector<std::vector<Real>>& rows) {
  const Index n = static_cast<Index>(rows.size());
  std::vector<Triplet> triplets;
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(rows[i].size()) != n) {
      throw std::invalid_argument("from_dense: ragged input");
    }
    for (Index j = 0; j < n; ++j) {
      if (rows[i][j] != rows[j][i]) throw std::invalid_argument("from_dense: not symmetric");
      if (rows[i][j] != 0.0) triplets.push_back({i, j, rows[i][j]});
    }
  }
  return SymmetricSparseMatrix::from_triplets(n, triplets);
}

inline std::vector<Real> random_vector(Index n, std::uint64_t seed, Real lo = -1.0,
                                       Real hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::vector<Real> out(static_cast<std::size_t>(n));
  for (Real& v : out) {
    v = lo + static_cast<Real>(rng() >> 11) * 0x1.0p-53 * (hi - lo);
  }
  return out;
}

// Random symmetric matrix that is well conditioned but indefinite: start
// from a random sparse pattern, then overwrite each diagonal entry with
// +/-(sum of the row's off-diagonal magnitudes + u), u in [1, 2]. Every
// Gershgorin disc then keeps a distance of at least 1 from zero while the
// random signs keep eigenvalues on both sides of it.
inline SymmetricSparseMatrix diagonally_dominant(Index n, Real density, std::uint64_t seed) {
  GenSpec spec;
  spec.n = n;
  spec.density = density;
  spec.seed = seed;
  const SymmetricSparseMatrix base = generate(spec);

  std::mt19937_64 rng(seed ^ 0x5eed5eed5eed5eedULL);
  std::vector<Triplet> triplets;
  for (Index j = 0; j < n; ++j) {
    Real row_sum = 0.0;
    for (const Entry& e : base.column(j)) {
      if (e.row == j) continue;
      row_sum += std::abs(e.value);
      if (e.row > j) triplets.push_back({e.row, j, e.value});
    }
    const Real u = 1.0 + static_cast<Real>(rng() >> 11) * 0x1.0p-53;
    const Real sign = (rng() & 1) ? 1.0 : -1.0;
    triplets.push_back({j, j, sign * (row_sum + u)});
  }
  return SymmetricSparseMatrix::from_triplets(n, triplets);
}

}  // namespace sparseldl::testing

#endif  // SPARSELDL_TESTS_TEST_MATRICES_HPP_
