#ifndef SPARSELDL_FACTORIZE_HPP_
#define SPARSELDL_FACTORIZE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sparseldl/dense_fallback.hpp"
#include "sparseldl/factorization.hpp"
#include "sparseldl/pivot_select.hpp"
#include "sparseldl/sparse_matrix.hpp"
#include "sparseldl/stability.hpp"
#include "sparseldl/types.hpp"

namespace sparseldl {

// Knobs for the factorization driver. The dense switch engages when the
// remaining off-diagonal density reaches `dense_switch_density` or the
// remaining dimension falls to `dense_switch_min_dim`; the defaults defer
// to the dense kernel only for a literally full remaining block.
// `on_sparse_pivot`, when set, observes every sparse-phase selection before
// the corresponding elimination (instrumentation for tests and tracing).
struct FactorizeOptions {
  StabilityConfig stability;
  Real dense_switch_density = 1.0;
  Index dense_switch_min_dim = 0;
  std::function<void(const EliminationState&, const SelectionTrace&, const PivotChoice&)>
      on_sparse_pivot;

  void validate() const {
    stability.validate();
    if (!(dense_switch_density >= 0.0) || dense_switch_density > 1.0) {
      throw std::invalid_argument("dense_switch_density must lie in [0, 1]");
    }
    if (dense_switch_min_dim < 0) {
      throw std::invalid_argument("dense_switch_min_dim must be nonnegative");
    }
  }
};

struct FactorizeStats {
  Index n = 0;
  std::int64_t nnz_L = 0;  // stored strictly-lower entries plus the n unit diagonal ones
  Index num_1x1 = 0;       // scalar pivots, sparse and dense phases combined
  Index num_2x2 = 0;       // 2x2 pivots, both phases
  std::optional<Index> dense_switch_at;  // remaining dimension when the dense phase engaged
  Real max_abs_L = 0.0;

  friend bool operator==(const FactorizeStats&, const FactorizeStats&) = default;
};

// Dense-switch policy. Off-diagonal density of the remaining submatrix is
// measured against the m(m-1) possible off-diagonal slots; a remaining
// block of dimension <= 1 has no such slots and counts as density zero.
inline bool should_switch_dense(const EliminationState& state, const FactorizeOptions& opts) {
  const Index m = state.num_active();
  if (m == 0) return false;
  if (m <= opts.dense_switch_min_dim) return true;
  Real density = 0.0;
  if (m > 1) {
    std::int64_t offdiag = 0;
    for (Index j : state.active()) offdiag += state.degree(j);
    density = static_cast<Real>(offdiag) /
              (static_cast<Real>(m) * static_cast<Real>(m - 1));
  }
  return density >= opts.dense_switch_density;
}

namespace internal {

// Pivot-column snapshot used by the Schur update: the pivot block's
// neighbor rows (ascending, pivot rows excluded) with the corresponding
// entries of C (the pivot columns) and of C B^{-1} (the L columns).
struct SchurWork {
  std::vector<Index> rows;
  std::vector<Real> c1;
  std::vector<Real> c2;
  std::vector<Real> l1;
  std::vector<Real> l2;
  bool two = false;
};

inline SchurWork gather_pivot_columns(const SymmetricSparseMatrix& m, const PivotChoice& pivot) {
  SchurWork w;
  if (pivot.is_one_by_one()) {
    const auto& col = m.column(pivot.i);
    for (const Entry& e : col) {
      if (e.row == pivot.i) continue;
      w.rows.push_back(e.row);
      w.c1.push_back(e.value);
      w.l1.push_back(e.value / pivot.a_ii);
    }
    return w;
  }

  w.two = true;
  const auto& ci = m.column(pivot.i);
  const auto& cj = m.column(pivot.j);
  std::size_t p = 0;
  std::size_t q = 0;
  while (p < ci.size() || q < cj.size()) {
    Index row;
    Real v1 = 0.0;
    Real v2 = 0.0;
    if (q == cj.size() || (p < ci.size() && ci[p].row < cj[q].row)) {
      row = ci[p].row;
      v1 = ci[p].value;
      ++p;
    } else if (p == ci.size() || cj[q].row < ci[p].row) {
      row = cj[q].row;
      v2 = cj[q].value;
      ++q;
    } else {
      row = ci[p].row;
      v1 = ci[p].value;
      v2 = cj[q].value;
      ++p;
      ++q;
    }
    if (row == pivot.i || row == pivot.j) continue;
    const Real det = pivot.a_ii * pivot.a_jj - pivot.a_ij * pivot.a_ij;
    w.rows.push_back(row);
    w.c1.push_back(v1);
    w.c2.push_back(v2);
    w.l1.push_back((v1 * pivot.a_jj - v2 * pivot.a_ij) / det);
    w.l2.push_back((v2 * pivot.a_ii - v1 * pivot.a_ij) / det);
  }
  return w;
}

// Rank-1/rank-2 correction term for the unordered row pair at aligned
// indices (lo, hi), lo <= hi. Both orientations of the symmetric update use
// this one evaluation, which keeps the two stored copies bit-identical.
inline Real schur_delta(const SchurWork& w, std::size_t lo, std::size_t hi) {
  Real v = w.l1[lo] * w.c1[hi];
  if (w.two) v += w.l2[lo] * w.c2[hi];
  return v;
}

// Applies A <- A - C B^{-1} C^T restricted to the pivot's neighbor columns,
// removes the pivot rows and columns from the remaining matrix, and refreshes
// cached degrees.
inline void eliminate_pivot(EliminationState& state, const PivotChoice& pivot,
                            const SchurWork& w) {
  SymmetricSparseMatrix& m = state.mutable_remaining();
  for (std::size_t s_idx = 0; s_idx < w.rows.size(); ++s_idx) {
    const Index s = w.rows[s_idx];
    const auto& old_col = m.column(s);
    std::vector<Entry> merged;
    merged.reserve(old_col.size() + w.rows.size());
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < old_col.size() || q < w.rows.size()) {
      const Index row_old = p < old_col.size() ? old_col[p].row : m.dim();
      const Index row_del = q < w.rows.size() ? w.rows[q] : m.dim();
      if (row_old < row_del) {
        if (row_old != pivot.i && row_old != pivot.j) merged.push_back(old_col[p]);
        ++p;
      } else if (row_del < row_old) {
        const Real v = schur_delta(w, std::min(q, s_idx), std::max(q, s_idx));
        if (-v != 0.0) merged.push_back({row_del, -v});
        ++q;
      } else {
        const Real v = schur_delta(w, std::min(q, s_idx), std::max(q, s_idx));
        const Real nv = old_col[p].value - v;
        if (nv != 0.0) merged.push_back({row_old, nv});
        ++p;
        ++q;
      }
    }
    m.replace_column(s, std::move(merged));
  }
  m.clear_column(pivot.i);
  if (pivot.is_two_by_two()) m.clear_column(pivot.j);
  state.note_elimination(pivot, w.rows);
}

}  // namespace internal

// Symmetric indefinite factorization P^T A P = L B L^T. Pivots come from
// the minimum-degree selection until the remaining block crosses the dense
// switch (or yields no stable pivot), after which the dense kernel finishes.
inline std::pair<Factorization, FactorizeStats> factorize(const SymmetricSparseMatrix& a,
                                                          const FactorizeOptions& opts = {}) {
  opts.validate();
  const Index n = a.dim();

  FactorizeStats stats;
  stats.n = n;

  EliminationState state = EliminationState::from_matrix(a);
  std::vector<Index> elim_order;
  elim_order.reserve(static_cast<std::size_t>(n));

  // L columns staged in elimination order. Sparse-phase rows are original
  // indices (remapped once the full order is known); dense-phase rows are
  // already final positions.
  struct StagedColumn {
    std::vector<Entry> entries;
    bool rows_are_final = false;
  };
  std::vector<StagedColumn> staged(static_cast<std::size_t>(n));

  Factorization f;

  while (state.num_active() > 0) {
    if (should_switch_dense(state, opts)) break;

    SelectionTrace trace;
    const PivotChoice choice =
        select_pivot(state, opts.stability, opts.on_sparse_pivot ? &trace : nullptr);
    if (choice.is_none()) break;  // dense fallback decides below
    if (opts.on_sparse_pivot) opts.on_sparse_pivot(state, trace, choice);

    const internal::SchurWork w = internal::gather_pivot_columns(state.remaining(), choice);
    const Index k = static_cast<Index>(elim_order.size());
    if (choice.is_one_by_one()) {
      StagedColumn col;
      for (std::size_t t = 0; t < w.rows.size(); ++t) {
        if (w.l1[t] != 0.0) col.entries.push_back({w.rows[t], w.l1[t]});
      }
      staged[k] = std::move(col);
      f.blocks.push_scalar(choice.a_ii);
      elim_order.push_back(choice.i);
      stats.num_1x1 += 1;
    } else {
      StagedColumn col1;
      StagedColumn col2;
      for (std::size_t t = 0; t < w.rows.size(); ++t) {
        if (w.l1[t] != 0.0) col1.entries.push_back({w.rows[t], w.l1[t]});
        if (w.l2[t] != 0.0) col2.entries.push_back({w.rows[t], w.l2[t]});
      }
      staged[k] = std::move(col1);
      staged[k + 1] = std::move(col2);
      f.blocks.push_two_by_two(choice.a_ii, choice.a_ij, choice.a_jj);
      elim_order.push_back(choice.i);
      elim_order.push_back(choice.j);
      stats.num_2x2 += 1;
    }
    internal::eliminate_pivot(state, choice, w);
  }

  // Dense tail: densify whatever remains and splice the dense factors in at
  // the current elimination offset.
  const Index k0 = static_cast<Index>(elim_order.size());
  const Index rem = state.num_active();
  if (rem > 0) {
    stats.dense_switch_at = rem;
    const std::vector<Index>& rcols = state.active();
    std::vector<Index> local(static_cast<std::size_t>(n), -1);
    for (Index t = 0; t < rem; ++t) local[rcols[t]] = t;

    DenseSymMatrix dm(rem);
    for (Index t = 0; t < rem; ++t) {
      for (const Entry& e : state.remaining().column(rcols[t])) {
        dm.set(local[e.row], t, e.value);
      }
    }
    const DenseFactor df = dense_factorize(dm, opts.stability);
    for (Index t = 0; t < rem; ++t) {
      elim_order.push_back(rcols[df.perm.original(t)]);
      StagedColumn col;
      for (const Entry& e : df.lower.column(t)) col.entries.push_back({k0 + e.row, e.value});
      col.rows_are_final = true;
      staged[k0 + t] = std::move(col);
    }
    for (const Block& b : df.blocks.blocks()) {
      if (b.size == 1) {
        f.blocks.push_scalar(b.b11);
        stats.num_1x1 += 1;
      } else {
        f.blocks.push_two_by_two(b.b11, b.b21, b.b22);
        stats.num_2x2 += 1;
      }
    }
  }

  // Assemble the global factor: remap sparse-phase rows from original
  // indices to final positions.
  std::vector<Index> pos_of(static_cast<std::size_t>(n));
  for (Index t = 0; t < n; ++t) pos_of[elim_order[t]] = t;
  f.perm = Permutation::from_inverse(elim_order);
  f.lower = SparseLowerTriangular(n);
  for (Index k = 0; k < n; ++k) {
    std::vector<Entry> entries = std::move(staged[k].entries);
    if (!staged[k].rows_are_final) {
      for (Entry& e : entries) e.row = pos_of[e.row];
    }
    for (const Entry& e : entries) {
      stats.max_abs_L = std::max(stats.max_abs_L, std::abs(e.value));
    }
    f.lower.set_column(k, std::move(entries));
  }
  stats.nnz_L = f.lower.nnz();
  return {std::move(f), stats};
}

}  // namespace sparseldl

#endif  // SPARSELDL_FACTORIZE_HPP_
