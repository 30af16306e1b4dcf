#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "sparseldl/sparseldl.hpp"
#include "support/dense_oracle.hpp"
#include "support/reference_pivot.hpp"
#include "support/test_matrices.hpp"

using namespace sparseldl;
using testing::DenseMatrix;

namespace {

std::vector<bool> active_mask(const EliminationState& state, Index n) {
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  for (Index j : state.active()) mask[j] = true;
  return mask;
}

// Dense-path Schur complement used as the oracle for degree bookkeeping:
// eliminates the pivot rows/columns of `m` and returns the updated matrix
// restricted to the surviving active columns. Untouched entries are copied,
// not recomputed.
SymmetricSparseMatrix oracle_schur(const SymmetricSparseMatrix& m, const PivotChoice& pivot,
                                   const std::vector<bool>& still_active) {
  DenseMatrix d = testing::to_dense(m);
  const Index n = m.dim();
  if (pivot.is_one_by_one()) {
    const Index i = pivot.i;
    for (Index r = 0; r < n; ++r) {
      if (r == i || !still_active[r]) continue;
      for (Index s = 0; s < n; ++s) {
        if (s == i || !still_active[s]) continue;
        d[r][s] -= d[r][i] * d[s][i] / d[i][i];
      }
    }
  } else {
    const Index i = pivot.i;
    const Index j = pivot.j;
    const Real det = d[i][i] * d[j][j] - d[i][j] * d[i][j];
    for (Index r = 0; r < n; ++r) {
      if (r == i || r == j || !still_active[r]) continue;
      const Real l1 = (d[r][i] * d[j][j] - d[r][j] * d[i][j]) / det;
      const Real l2 = (d[r][j] * d[i][i] - d[r][i] * d[i][j]) / det;
      for (Index s = 0; s < n; ++s) {
        if (s == i || s == j || !still_active[s]) continue;
        d[r][s] -= l1 * d[s][i] + l2 * d[s][j];
      }
    }
  }
  std::vector<Triplet> triplets;
  for (Index r = 0; r < n; ++r) {
    for (Index s = r; s < n; ++s) {
      if (!still_active[r] || !still_active[s]) continue;
      if (r == pivot.i || s == pivot.i) continue;
      if (pivot.is_two_by_two() && (r == pivot.j || s == pivot.j)) continue;
      // Symmetrize: the two dense orientations can differ in the last bit.
      const Real v = d[r][s];
      if (v != 0.0) triplets.push_back({s, r, v});
    }
  }
  return SymmetricSparseMatrix::from_triplets(n, triplets);
}

}  // namespace

TEST_CASE("scalar stability test follows the threshold rule") {
  const StabilityConfig cfg{0.01};

  auto strong = EliminationState::from_matrix(testing::from_dense({{5, 2}, {2, 0}}));
  REQUIRE(accept_1x1(strong, 0, cfg));

  auto zero_diag = EliminationState::from_matrix(testing::from_dense({{0, 3}, {3, 1}}));
  REQUIRE_FALSE(accept_1x1(zero_diag, 0, cfg));

  // The comparison is inclusive at the boundary.
  auto boundary = EliminationState::from_matrix(testing::from_dense({{0.01, 1}, {1, 0}}));
  REQUIRE(accept_1x1(boundary, 0, cfg));
}

TEST_CASE("a fully zero column never pivots") {
  auto state = EliminationState::from_matrix(testing::from_dense({{0, 0}, {0, 5}}));
  REQUIRE_FALSE(accept_1x1(state, 0, StabilityConfig{0.01}));
  REQUIRE(accept_1x1(state, 1, StabilityConfig{0.01}));
}

TEST_CASE("candidate partners are the column's off-diagonal pattern") {
  auto lonely = EliminationState::from_matrix(testing::from_dense({{1, 0}, {0, 2}}));
  REQUIRE(candidate_set(lonely, 0).empty());

  const auto m = testing::from_dense({
      {1, 4, 0, 0},
      {4, 2, 0, 5},
      {0, 0, 1, 0},
      {0, 5, 0, 3},
  });
  auto state = EliminationState::from_matrix(m);
  REQUIRE(candidate_set(state, 1) == std::vector<Index>{0, 3});
}

TEST_CASE("candidate partners match a brute-force column scan") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    GenSpec spec;
    spec.n = 8;
    spec.density = 0.4;
    spec.seed = rng();
    const auto m = generate(spec);
    auto state = EliminationState::from_matrix(m);
    const DenseMatrix d = testing::to_dense(m);
    for (Index i = 0; i < 8; ++i) {
      std::vector<Index> expected;
      for (Index z = 0; z < 8; ++z) {
        if (z != i && d[z][i] != 0.0) expected.push_back(z);
      }
      REQUIRE(candidate_set(state, i) == expected);
    }
  }
}

TEST_CASE("pair degree counts the union of two column patterns") {
  // Disjoint off-pair patterns of sizes 2 and 3.
  const auto disjoint = testing::from_dense({
      {0, 1, 2, 2, 0, 0, 0},
      {1, 0, 0, 0, 3, 3, 3},
      {2, 0, 1, 0, 0, 0, 0},
      {2, 0, 0, 1, 0, 0, 0},
      {0, 3, 0, 0, 1, 0, 0},
      {0, 3, 0, 0, 0, 1, 0},
      {0, 3, 0, 0, 0, 0, 1},
  });
  auto s1 = EliminationState::from_matrix(disjoint);
  REQUIRE(pair_degree(s1, 0, 1) == 5);

  // z is i's only neighbor and has no other neighbors itself.
  const auto pair_only = testing::from_dense({{0, 7}, {7, 0}});
  auto s2 = EliminationState::from_matrix(pair_only);
  REQUIRE(pair_degree(s2, 0, 1) == 0);

  // Identical off-pair patterns {4, 5}.
  const auto identical = testing::from_dense({
      {0, 1, 0, 0, 2, 3},
      {1, 0, 0, 0, 4, 5},
      {0, 0, 1, 0, 0, 0},
      {0, 0, 0, 1, 0, 0},
      {2, 4, 0, 0, 1, 0},
      {3, 5, 0, 0, 0, 1},
  });
  auto s3 = EliminationState::from_matrix(identical);
  REQUIRE(pair_degree(s3, 0, 1) == 2);
}

TEST_CASE("pair degree matches the brute-force union count") {
  std::mt19937_64 rng(13);
  for (Index n : {10, 25, 50}) {
    GenSpec spec;
    spec.n = n;
    spec.density = 0.2;
    spec.seed = rng();
    const auto m = generate(spec);
    auto state = EliminationState::from_matrix(m);
    const DenseMatrix d = testing::to_dense(m);
    const std::vector<bool> mask(static_cast<std::size_t>(n), true);
    for (Index i = 0; i < n; ++i) {
      for (Index z = 0; z < n; ++z) {
        if (i == z) continue;
        REQUIRE(pair_degree(state, i, z) == testing::ref_pair_degree(d, mask, i, z));
      }
    }
  }
}

TEST_CASE("2x2 stability test follows the inverse-magnitude rule") {
  const StabilityConfig cfg{0.01};
  // Self-inverse off-diagonal block against mild column maxima.
  REQUIRE(stable_2x2(0.0, 1.0, 0.0, 0.5, 0.5, cfg));
  // Singular block.
  REQUIRE_FALSE(stable_2x2(1.0, 1.0, 1.0, 0.5, 0.5, cfg));
  // Near-singular block against large maxima: the product lands just above
  // the 1/alpha bound.
  REQUIRE_FALSE(stable_2x2(1e-6, 1.0, 1e-6, 200.0, 200.0, cfg));

  const auto m = testing::from_dense({{0, 1, 0.5}, {1, 0, 0}, {0.5, 0, 0.2}});
  auto state = EliminationState::from_matrix(m);
  REQUIRE(accept_2x2(state, 0, 1, cfg));
}

TEST_CASE("selection prefers the smallest minimum-degree column") {
  auto state = EliminationState::from_matrix(testing::from_dense({{5, 0}, {0, 3}}));
  const auto choice = select_pivot(state, StabilityConfig{0.01});
  REQUIRE(choice.is_one_by_one());
  REQUIRE(choice.i == 0);
  REQUIRE(choice.a_ii == 5.0);
}

TEST_CASE("zero diagonals force a 2x2 pivot") {
  auto state = EliminationState::from_matrix(testing::from_dense({{0, 1}, {1, 0}}));
  const auto choice = select_pivot(state, StabilityConfig{0.01});
  REQUIRE(choice.is_two_by_two());
  REQUIRE(choice.i == 0);
  REQUIRE(choice.j == 1);
  REQUIRE(choice.a_ij == 1.0);
}

TEST_CASE("selection matches the brute-force reference on random instances") {
  std::mt19937_64 rng(17);
  const StabilityConfig cfg{0.01};
  for (int trial = 0; trial < 50; ++trial) {
    GenSpec spec;
    spec.n = 6;
    spec.density = 0.5;
    spec.seed = rng();
    const auto m = generate(spec);
    auto state = EliminationState::from_matrix(m);

    // Walk a few eliminations deep, comparing at every state.
    while (state.num_active() > 0) {
      const DenseMatrix d = testing::to_dense(state.remaining());
      const auto mask = active_mask(state, m.dim());
      const auto choice = select_pivot(state, cfg);
      const auto expected = testing::ref_select_pivot(d, mask, cfg.alpha);
      if (expected.kind == testing::RefChoice::Kind::kNone) {
        REQUIRE(choice.is_none());
        break;
      }
      if (expected.kind == testing::RefChoice::Kind::kOne) {
        REQUIRE(choice.is_one_by_one());
        REQUIRE(choice.i == expected.i);
      } else {
        REQUIRE(choice.is_two_by_two());
        REQUIRE(choice.i == expected.i);
        REQUIRE(choice.j == expected.j);
      }
      auto next = oracle_schur(state.remaining(), choice, mask);
      state = update_after_elimination(std::move(state), choice, std::move(next));
      state.check_degrees();
    }
  }
}

TEST_CASE("selection is deterministic") {
  GenSpec spec;
  spec.n = 12;
  spec.density = 0.3;
  spec.seed = 99;
  auto state = EliminationState::from_matrix(generate(spec));
  const auto a = select_pivot(state, StabilityConfig{0.01});
  const auto b = select_pivot(state, StabilityConfig{0.01});
  REQUIRE(a.kind == b.kind);
  REQUIRE(a.i == b.i);
  REQUIRE(a.j == b.j);
}

TEST_CASE("selection trace records the working-set walk") {
  // Column 0 has the lowest degree but cannot pivot (zero column), so the
  // scan must move on and the trace must show both stops.
  const auto m = testing::from_dense({
      {0, 0, 0},
      {0, 2, 1},
      {0, 1, 2},
  });
  auto state = EliminationState::from_matrix(m);
  SelectionTrace trace;
  const auto choice = select_pivot(state, StabilityConfig{0.01}, &trace);
  REQUIRE(choice.is_one_by_one());
  REQUIRE(choice.i == 1);
  REQUIRE(trace.considered.size() == 2);
  REQUIRE(trace.considered[0].column == 0);
  REQUIRE(trace.considered[0].degree == 0);
  REQUIRE(trace.considered[1].column == 1);
  REQUIRE(trace.considered[1].degree == 1);
}

TEST_CASE("eliminating an isolated column leaves other degrees alone") {
  const auto m = testing::from_dense({
      {4, 0, 0},
      {0, 1, 2},
      {0, 2, 1},
  });
  auto state = EliminationState::from_matrix(m);
  const auto choice = select_pivot(state, StabilityConfig{0.01});
  REQUIRE(choice.is_one_by_one());
  REQUIRE(choice.i == 0);
  const auto mask = active_mask(state, 3);
  auto next = oracle_schur(state.remaining(), choice, mask);
  state = update_after_elimination(std::move(state), choice, std::move(next));
  REQUIRE(state.num_active() == 2);
  REQUIRE(state.degree(1) == 1);
  REQUIRE(state.degree(2) == 1);
  state.check_degrees();
}

TEST_CASE("eliminating a star center connects the leaves") {
  // Center 0 joined to four leaves; eliminating it makes the leaves a clique.
  std::vector<Triplet> t = {{0, 0, 1.0}};
  for (Index leaf = 1; leaf <= 4; ++leaf) {
    t.push_back({leaf, 0, 0.5});
    t.push_back({leaf, leaf, 1.0});
  }
  const auto m = SymmetricSparseMatrix::from_triplets(5, t);
  auto state = EliminationState::from_matrix(m);
  REQUIRE(state.degree(0) == 4);

  const auto pivot = PivotChoice::one_by_one(0, 1.0);
  const auto mask = active_mask(state, 5);
  auto next = oracle_schur(state.remaining(), pivot, mask);
  state = update_after_elimination(std::move(state), pivot, std::move(next));
  for (Index leaf = 1; leaf <= 4; ++leaf) REQUIRE(state.degree(leaf) == 3);
  state.check_degrees();
}

TEST_CASE("degree cache equals a full recount after every elimination") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    GenSpec spec;
    spec.n = 20;
    spec.density = 0.25;
    spec.seed = rng();
    const auto m = generate(spec);
    auto state = EliminationState::from_matrix(m);
    const StabilityConfig cfg{0.01};
    while (state.num_active() > 0) {
      const auto choice = select_pivot(state, cfg);
      if (choice.is_none()) break;
      const auto mask = active_mask(state, m.dim());
      auto next = oracle_schur(state.remaining(), choice, mask);
      state = update_after_elimination(std::move(state), choice, std::move(next));
      state.check_degrees();
      const DenseMatrix d = testing::to_dense(state.remaining());
      const auto new_mask = active_mask(state, m.dim());
      for (Index j : state.active()) {
        REQUIRE(state.degree(j) == testing::ref_offdiag_count(d, new_mask, j));
      }
    }
  }
}
