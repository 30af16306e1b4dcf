#ifndef SPARSELDL_PIVOT_SELECT_HPP_
#define SPARSELDL_PIVOT_SELECT_HPP_

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "sparseldl/sparse_matrix.hpp"
#include "sparseldl/stability.hpp"
#include "sparseldl/types.hpp"

namespace sparseldl {

// A selected pivot: a single diagonal entry, a symmetric 2x2 block on
// columns (i, j), or nothing (no stable pivot among the active columns).
// Block values are captured at selection time.
struct PivotChoice {
  enum class Kind { kNone, kOneByOne, kTwoByTwo };

  Kind kind = Kind::kNone;
  Index i = -1;
  Index j = -1;
  Real a_ii = 0.0;
  Real a_ij = 0.0;
  Real a_jj = 0.0;

  static PivotChoice none() { return {}; }

  static PivotChoice one_by_one(Index i, Real a_ii) {
    PivotChoice p;
    p.kind = Kind::kOneByOne;
    p.i = i;
    p.a_ii = a_ii;
    return p;
  }

  static PivotChoice two_by_two(Index i, Index j, Real a_ii, Real a_ij, Real a_jj) {
    PivotChoice p;
    p.kind = Kind::kTwoByTwo;
    p.i = i;
    p.j = j;
    p.a_ii = a_ii;
    p.a_ij = a_ij;
    p.a_jj = a_jj;
    return p;
  }

  bool is_none() const { return kind == Kind::kNone; }
  bool is_one_by_one() const { return kind == Kind::kOneByOne; }
  bool is_two_by_two() const { return kind == Kind::kTwoByTwo; }
  Index width() const { return is_two_by_two() ? 2 : (is_one_by_one() ? 1 : 0); }
};

// Instrumentation hook for select_pivot: records each minimum-degree column
// the scan settled on, in the order tried.
struct SelectionTrace {
  struct Consideration {
    Index column;
    Index degree;
  };
  std::vector<Consideration> considered;
};

// Live state of the elimination: the remaining submatrix (over original
// indices, eliminated columns cleared), the active column set, and a cached
// off-diagonal count per active column.
class EliminationState {
 public:
  EliminationState() = default;

  static EliminationState from_matrix(SymmetricSparseMatrix remaining) {
    EliminationState s;
    const Index n = remaining.dim();
    s.remaining_ = std::move(remaining);
    s.active_.resize(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) s.active_[j] = j;
    s.active_mask_.assign(static_cast<std::size_t>(n), true);
    s.degree_.resize(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) s.degree_[j] = s.remaining_.offdiag_count(j);
    return s;
  }

  const SymmetricSparseMatrix& remaining() const { return remaining_; }
  SymmetricSparseMatrix& mutable_remaining() { return remaining_; }

  // Active columns in ascending order.
  const std::vector<Index>& active() const { return active_; }
  Index num_active() const { return static_cast<Index>(active_.size()); }
  bool is_active(Index j) const { return active_mask_[j]; }
  Index degree(Index j) const { return degree_[j]; }

  // Books a completed elimination: deactivates the pivot columns and
  // recounts the cached degree of every column in `changed` (columns whose
  // pattern the Schur update may have touched). `remaining_` must already
  // hold the updated submatrix.
  void note_elimination(const PivotChoice& pivot, std::span<const Index> changed) {
    deactivate(pivot.i);
    if (pivot.is_two_by_two()) deactivate(pivot.j);
    for (Index z : changed) {
      if (active_mask_[z]) degree_[z] = remaining_.offdiag_count(z);
    }
  }

  // Test support: verifies every cached degree against a full recount.
  void check_degrees() const {
    for (Index j : active_) {
      if (degree_[j] != remaining_.offdiag_count(j)) {
        throw std::logic_error("cached degree out of sync");
      }
    }
  }

 private:
  void deactivate(Index j) {
    active_mask_[j] = false;
    auto it = std::lower_bound(active_.begin(), active_.end(), j);
    if (it != active_.end() && *it == j) active_.erase(it);
  }

  SymmetricSparseMatrix remaining_;
  std::vector<Index> active_;
  std::vector<bool> active_mask_;
  std::vector<Index> degree_;
};

// Scalar stability test on the live submatrix (diagonal against the largest
// off-diagonal magnitude of its column).
inline bool accept_1x1(const EliminationState& state, Index i, const StabilityConfig& config) {
  const Real diag = state.remaining().value_at(i, i);
  const Real col_max = state.remaining().col_abs_max_excluding(i, i);
  return stable_1x1(diag, col_max, config);
}

// Columns z that can partner column i in a 2x2 pivot: active, z != i, and
// a_iz nonzero. Ascending order.
inline std::vector<Index> candidate_set(const EliminationState& state, Index i) {
  std::vector<Index> out;
  for (const Entry& e : state.remaining().column(i)) {
    if (e.row != i && state.is_active(e.row)) out.push_back(e.row);
  }
  return out;
}

// Number of rows (outside {i, z}) carrying a nonzero in column i or column
// z: the size of the union of the two column patterns. This is the fill-in
// proxy used to rank 2x2 candidates.
inline Index pair_degree(const EliminationState& state, Index i, Index z) {
  const auto& ci = state.remaining().column(i);
  const auto& cz = state.remaining().column(z);
  std::size_t p = 0;
  std::size_t q = 0;
  Index count = 0;
  while (p < ci.size() || q < cz.size()) {
    Index row;
    if (q == cz.size()) {
      row = ci[p++].row;
    } else if (p == ci.size()) {
      row = cz[q++].row;
    } else if (ci[p].row < cz[q].row) {
      row = ci[p++].row;
    } else if (cz[q].row < ci[p].row) {
      row = cz[q++].row;
    } else {
      row = ci[p].row;
      ++p;
      ++q;
    }
    if (row != i && row != z) ++count;
  }
  return count;
}

// 2x2 stability test on the live submatrix. Column maxima exclude both
// pivot rows.
inline bool accept_2x2(const EliminationState& state, Index i, Index j,
                       const StabilityConfig& config) {
  const SymmetricSparseMatrix& m = state.remaining();
  const Real a_ii = m.value_at(i, i);
  const Real a_ij = m.value_at(i, j);
  const Real a_jj = m.value_at(j, j);
  const Real col_max_i = m.col_abs_max_excluding(i, i, j);
  const Real col_max_j = m.col_abs_max_excluding(j, i, j);
  return stable_2x2(a_ii, a_ij, a_jj, col_max_i, col_max_j, config);
}

// Minimum-degree pivot selection with stability screening. Works through a
// per-call copy of the active set: repeatedly take the minimum-degree
// column (ties to the smallest index), accept it as a 1x1 pivot if stable,
// otherwise try its nonzero partners as 2x2 pivots in ascending
// (pair_degree, index) order. A column whose candidates all fail is dropped
// from the working set and the search continues. Returns a kNone choice
// when the working set empties.
inline PivotChoice select_pivot(const EliminationState& state, const StabilityConfig& config,
                                SelectionTrace* trace = nullptr) {
  std::vector<Index> working(state.active());
  while (!working.empty()) {
    std::size_t best_pos = 0;
    for (std::size_t k = 1; k < working.size(); ++k) {
      // `working` stays ascending, so strict < also enforces the
      // smallest-index tie-break.
      if (state.degree(working[k]) < state.degree(working[best_pos])) best_pos = k;
    }
    const Index i = working[best_pos];
    if (trace != nullptr) trace->considered.push_back({i, state.degree(i)});

    if (accept_1x1(state, i, config)) {
      return PivotChoice::one_by_one(i, state.remaining().value_at(i, i));
    }

    std::vector<Index> candidates = candidate_set(state, i);
    std::vector<std::pair<Index, Index>> ranked;  // (pair_degree, z)
    ranked.reserve(candidates.size());
    for (Index z : candidates) ranked.push_back({pair_degree(state, i, z), z});
    std::sort(ranked.begin(), ranked.end());
    for (const auto& [deg, z] : ranked) {
      (void)deg;
      if (accept_2x2(state, i, z, config)) {
        const SymmetricSparseMatrix& m = state.remaining();
        return PivotChoice::two_by_two(i, z, m.value_at(i, i), m.value_at(i, z),
                                       m.value_at(z, z));
      }
    }
    working.erase(working.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return PivotChoice::none();
}

// Functional form of the post-elimination bookkeeping: swaps in the Schur
// complement produced by the factorizer, retires the pivot columns, and
// recounts degrees for every column that was adjacent to the pivot (the
// only patterns an elimination can change).
inline EliminationState update_after_elimination(EliminationState state,
                                                 const PivotChoice& pivot,
                                                 SymmetricSparseMatrix new_remaining) {
  std::vector<Index> changed;
  for (const Entry& e : state.remaining().column(pivot.i)) {
    if (e.row != pivot.i && (!pivot.is_two_by_two() || e.row != pivot.j)) {
      changed.push_back(e.row);
    }
  }
  if (pivot.is_two_by_two()) {
    for (const Entry& e : state.remaining().column(pivot.j)) {
      if (e.row != pivot.i && e.row != pivot.j) changed.push_back(e.row);
    }
  }
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());

  state.mutable_remaining() = std::move(new_remaining);
  state.note_elimination(pivot, changed);
  return state;
}

}  // namespace sparseldl

#endif  // SPARSELDL_PIVOT_SELECT_HPP_
