#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "sparseldl/sparseldl.hpp"
#include "support/dense_oracle.hpp"
#include "support/test_matrices.hpp"

using namespace sparseldl;

namespace {

DenseSymMatrix dense_from_rows(const std::vector<std::vector<Real>>& rows) {
  DenseSymMatrix m(static_cast<Index>(rows.size()));
  for (Index i = 0; i < m.dim(); ++i) {
    for (Index j = 0; j <= i; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

DenseSymMatrix random_dense(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DenseSymMatrix m(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      m.set(i, j, -1.0 + static_cast<Real>(rng() >> 11) * 0x1.0p-53 * 2.0);
    }
  }
  return m;
}

SymmetricSparseMatrix sparsify(const DenseSymMatrix& m) {
  std::vector<Triplet> t;
  for (Index j = 0; j < m.dim(); ++j) {
    for (Index i = j; i < m.dim(); ++i) {
      if (m.at(i, j) != 0.0) t.push_back({i, j, m.at(i, j)});
    }
  }
  return SymmetricSparseMatrix::from_triplets(m.dim(), t);
}

Real dense_factor_residual(const DenseSymMatrix& m, const DenseFactor& df) {
  Factorization f;
  f.perm = df.perm;
  f.lower = df.lower;
  f.blocks = df.blocks;
  return testing::dense_reconstruction_residual(sparsify(m), f);
}

}  // namespace

TEST_CASE("a 1x1 matrix pivots on its diagonal") {
  const auto m = dense_from_rows({{7.0}});
  const auto choice = bbk_select(m, StabilityConfig{0.01});
  REQUIRE(choice.is_one_by_one());
  REQUIRE(choice.i == 0);
  REQUIRE(choice.a_ii == 7.0);
}

TEST_CASE("zero diagonals force the dense 2x2 rule") {
  const auto m = dense_from_rows({{0, 0}, {2, 0}});
  const auto choice = bbk_select(m, StabilityConfig{0.01});
  REQUIRE(choice.is_two_by_two());
  REQUIRE(choice.i == 0);
  REQUIRE(choice.j == 1);
  REQUIRE(choice.a_ij == 2.0);
}

TEST_CASE("a growth-test pass cannot override the scalar stability rule") {
  // Column 0's diagonal survives the classical growth shortcut
  // (|d| * omega_p >= threshold * omega1^2) but fails the alpha test, so the
  // walk must end up at the far 2x2 pair instead.
  const auto m = dense_from_rows({
      {0.001, 0, 0},
      {1, 0, 0},
      {0, 1000, 0},
  });
  const auto choice = bbk_select(m, StabilityConfig{0.01});
  REQUIRE(choice.is_two_by_two());
  REQUIRE(choice.i == 1);
  REQUIRE(choice.j == 2);

  const auto df = dense_factorize(m, StabilityConfig{0.01});
  REQUIRE(dense_factor_residual(m, df) <= 1e-12);
}

TEST_CASE("selection fails only on the zero matrix") {
  REQUIRE(bbk_select(DenseSymMatrix(4), StabilityConfig{0.01}).is_none());
  REQUIRE(bbk_select(DenseSymMatrix(0), StabilityConfig{0.01}).is_none());

  // A single tiny entry anywhere must still produce a pivot.
  DenseSymMatrix off(3);
  off.set(2, 1, 1e-30);
  REQUIRE(bbk_select(off, StabilityConfig{0.01}).is_two_by_two());

  DenseSymMatrix diag(3);
  diag.set(1, 1, -1e-30);
  const auto choice = bbk_select(diag, StabilityConfig{0.01});
  REQUIRE(choice.is_one_by_one());
  REQUIRE(choice.i == 1);

  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_dense(5, rng());
    REQUIRE_FALSE(bbk_select(m, StabilityConfig{0.01}).is_none());
  }
}

TEST_CASE("dense factorization handles the edge dimensions") {
  const auto empty = dense_factorize(DenseSymMatrix(0), StabilityConfig{0.01});
  REQUIRE(empty.perm.dim() == 0);
  REQUIRE(empty.blocks.num_blocks() == 0);

  const auto single = dense_factorize(dense_from_rows({{-3.0}}), StabilityConfig{0.01});
  REQUIRE(single.blocks.num_blocks() == 1);
  REQUIRE(single.blocks.block(0).b11 == -3.0);
  REQUIRE(single.lower.nnz() == 1);
}

TEST_CASE("dense factorization reconstructs random matrices") {
  std::mt19937_64 rng(67);
  for (Index n : {6, 10}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto m = random_dense(n, rng());
      const auto df = dense_factorize(m, StabilityConfig{0.01});
      REQUIRE(dense_factor_residual(m, df) <= 1e-13 * std::max(1.0, n * 1.0));

      Real max_abs = 0.0;
      for (Index j = 0; j < n; ++j) {
        for (const Entry& e : df.lower.column(j)) max_abs = std::max(max_abs, std::abs(e.value));
      }
      REQUIRE(max_abs <= 100.0);
    }
  }
}

TEST_CASE("the dense factor bound tightens with alpha") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_dense(8, rng());
    const auto df = dense_factorize(m, StabilityConfig{0.5});
    for (Index j = 0; j < 8; ++j) {
      for (const Entry& e : df.lower.column(j)) REQUIRE(std::abs(e.value) <= 2.0);
    }
  }
}

TEST_CASE("the growth threshold is an adjustable knob") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 5; ++trial) {
    const auto m = random_dense(7, rng());
    for (Real threshold : {0.25, 0.5, kBunchKaufmanThreshold}) {
      const auto df = dense_factorize(m, StabilityConfig{0.01}, threshold);
      REQUIRE(dense_factor_residual(m, df) <= 1e-13);
    }
  }
}

TEST_CASE("dense factorization throws on singular trailing blocks") {
  REQUIRE_THROWS_AS(dense_factorize(DenseSymMatrix(3), StabilityConfig{0.01}),
                    SingularMatrixError);

  // Rank-one matrix: the second step sees an exactly zero trailing block.
  const auto m = dense_from_rows({{1, 0}, {2, 4}});
  REQUIRE_THROWS_AS(dense_factorize(m, StabilityConfig{0.01}), SingularMatrixError);
}

TEST_CASE("dense matrices store mirrored values") {
  DenseSymMatrix m(3);
  m.set(2, 0, -4.0);
  REQUIRE(m.at(0, 2) == -4.0);
  m.check_invariants();
  REQUIRE(m.col_abs_max_excluding(0, 0) == 4.0);
  REQUIRE(m.col_abs_max_excluding(0, 0, 2) == 0.0);
}
