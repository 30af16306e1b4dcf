#ifndef SPARSELDL_DENSE_FALLBACK_HPP_
#define SPARSELDL_DENSE_FALLBACK_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sparseldl/block_diagonal.hpp"
#include "sparseldl/factorization.hpp"
#include "sparseldl/permutation.hpp"
#include "sparseldl/pivot_select.hpp"
#include "sparseldl/stability.hpp"
#include "sparseldl/types.hpp"

namespace sparseldl {

// Classical Bunch-Kaufman growth-balancing constant, (1 + sqrt(17)) / 8.
inline const Real kBunchKaufmanThreshold = (1.0 + std::sqrt(17.0)) / 8.0;

// Dense symmetric matrix, full square storage. Mirrored writes keep the two
// triangles bit-identical.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;

  explicit DenseSymMatrix(Index n) : n_(n), values_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 0) throw std::invalid_argument("matrix dimension must be nonnegative");
  }

  Index dim() const { return n_; }

  Real at(Index i, Index j) const { return values_[static_cast<std::size_t>(i) * n_ + j]; }

  // Writes both (i,j) and (j,i).
  void set(Index i, Index j, Real value) {
    values_[static_cast<std::size_t>(i) * n_ + j] = value;
    values_[static_cast<std::size_t>(j) * n_ + i] = value;
  }

  Real col_abs_max_excluding(Index j, Index excl1, Index excl2 = -1) const {
    Real best = 0.0;
    for (Index i = 0; i < n_; ++i) {
      if (i == excl1 || i == excl2) continue;
      best = std::max(best, std::abs(at(i, j)));
    }
    return best;
  }

  void check_invariants() const {
    for (Index i = 0; i < n_; ++i) {
      for (Index j = 0; j < i; ++j) {
        if (std::bit_cast<std::uint64_t>(at(i, j)) != std::bit_cast<std::uint64_t>(at(j, i))) {
          throw std::logic_error("dense matrix not symmetric");
        }
      }
    }
  }

  friend bool operator==(const DenseSymMatrix&, const DenseSymMatrix&) = default;

 private:
  Index n_ = 0;
  std::vector<Real> values_;
};

namespace internal {

inline bool dense_stable_1x1(const DenseSymMatrix& m, Index i, const StabilityConfig& config) {
  return stable_1x1(m.at(i, i), m.col_abs_max_excluding(i, i), config);
}

inline bool dense_stable_2x2(const DenseSymMatrix& m, Index i, Index j,
                             const StabilityConfig& config) {
  return stable_2x2(m.at(i, i), m.at(i, j), m.at(j, j), m.col_abs_max_excluding(i, i, j),
                    m.col_abs_max_excluding(j, i, j), config);
}

// Largest off-diagonal magnitude in column r and the row attaining it
// (smallest such row on ties).
inline std::pair<Real, Index> column_offdiag_max(const DenseSymMatrix& m, Index r) {
  Real best = 0.0;
  Index arg = -1;
  for (Index i = 0; i < m.dim(); ++i) {
    if (i == r) continue;
    const Real a = std::abs(m.at(i, r));
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  return {best, arg};
}

}  // namespace internal

// Pivot search for the dense phase. Runs the Bunch-Kaufman step on the
// leading column first; when a candidate fails, advances to the column of
// the largest off-diagonal seen so far (the bounded variant's walk). Every
// candidate, from whichever rule, must additionally pass the scalar or 2x2
// stability test with `config.alpha` before it is returned, so the factor
// bound |L| <= 1/alpha holds in the dense phase too. If the walk stalls, a
// global search over the largest diagonal and the largest off-diagonal pair
// decides; that search fails only on an exactly zero matrix.
inline PivotChoice bbk_select(const DenseSymMatrix& m, const StabilityConfig& config,
                              Real bk_threshold = kBunchKaufmanThreshold) {
  const Index n = m.dim();
  if (n == 0) return PivotChoice::none();

  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  Index r = 0;
  while (!visited[r]) {
    visited[r] = true;
    const auto [omega1, p] = internal::column_offdiag_max(m, r);
    const Real d_r = m.at(r, r);
    if (omega1 == 0.0) {
      // Column r touches nothing else; its diagonal either pivots or the
      // column is dead.
      if (d_r != 0.0) return PivotChoice::one_by_one(r, d_r);
      break;
    }
    if (std::abs(d_r) >= bk_threshold * omega1 && internal::dense_stable_1x1(m, r, config)) {
      return PivotChoice::one_by_one(r, d_r);
    }
    const Real omega_p = internal::column_offdiag_max(m, p).first;
    if (std::abs(d_r) * omega_p >= bk_threshold * omega1 * omega1 &&
        internal::dense_stable_1x1(m, r, config)) {
      return PivotChoice::one_by_one(r, d_r);
    }
    if (std::abs(m.at(p, p)) >= bk_threshold * omega_p &&
        internal::dense_stable_1x1(m, p, config)) {
      return PivotChoice::one_by_one(p, m.at(p, p));
    }
    const Index i = std::min(r, p);
    const Index j = std::max(r, p);
    if (internal::dense_stable_2x2(m, i, j, config)) {
      return PivotChoice::two_by_two(i, j, m.at(i, i), m.at(i, j), m.at(j, j));
    }
    r = p;
  }

  // Global fallback: largest diagonal versus largest off-diagonal pair.
  Real mu_diag = 0.0;
  Index d = -1;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(m.at(i, i)) > mu_diag) {
      mu_diag = std::abs(m.at(i, i));
      d = i;
    }
  }
  Real mu_off = 0.0;
  Index p = -1;
  Index q = -1;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      if (std::abs(m.at(i, j)) > mu_off) {
        mu_off = std::abs(m.at(i, j));
        p = j;
        q = i;
      }
    }
  }
  if (mu_diag == 0.0 && mu_off == 0.0) return PivotChoice::none();
  if (mu_diag >= config.alpha * mu_off && d >= 0 && internal::dense_stable_1x1(m, d, config)) {
    return PivotChoice::one_by_one(d, m.at(d, d));
  }
  if (p >= 0 && internal::dense_stable_2x2(m, p, q, config)) {
    return PivotChoice::two_by_two(p, q, m.at(p, p), m.at(p, q), m.at(q, q));
  }
  return PivotChoice::none();
}

// Factorization of a dense block: local permutation, unit lower triangular
// factor (exact zeros dropped), block diagonal.
struct DenseFactor {
  Permutation perm;
  SparseLowerTriangular lower;
  BlockDiagonal blocks;
};

// Full dense elimination: PᵀmP = LBLᵀ with pivots from bbk_select. Works on
// a pivoted view of a scratch copy; position k of `order` names the matrix
// row living at factor row k.
inline DenseFactor dense_factorize(const DenseSymMatrix& m, const StabilityConfig& config,
                                   Real bk_threshold = kBunchKaufmanThreshold) {
  config.validate();
  const Index n = m.dim();
  DenseSymMatrix w = m;
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) order[k] = k;

  DenseFactor out;
  out.lower = SparseLowerTriangular(n);

  // Factor columns are staged against original row indices: `order` keeps
  // mutating as later pivots swap rows, so positions recorded now would go
  // stale. The final positions are patched in after the loop.
  std::vector<std::vector<std::pair<Index, Real>>> staged(static_cast<std::size_t>(n));

  Index k = 0;
  while (k < n) {
    const Index rem = n - k;
    DenseSymMatrix view(rem);
    for (Index c = 0; c < rem; ++c) {
      for (Index r = c; r < rem; ++r) {
        view.set(r, c, w.at(order[k + r], order[k + c]));
      }
    }
    const PivotChoice choice = bbk_select(view, config, bk_threshold);
    if (choice.is_none()) {
      throw SingularMatrixError("dense block has no nonzero pivot (singular matrix)");
    }

    if (choice.is_one_by_one()) {
      std::swap(order[k], order[k + choice.i]);
      const Real d = choice.a_ii;
      std::vector<Real> l(static_cast<std::size_t>(rem), 0.0);
      for (Index r = 1; r < rem; ++r) {
        l[r] = w.at(order[k + r], order[k]) / d;
        if (l[r] != 0.0) staged[k].push_back({order[k + r], l[r]});
      }
      out.blocks.push_scalar(d);
      for (Index c = 1; c < rem; ++c) {
        const Real c_c = w.at(order[k + c], order[k]);
        for (Index r = c; r < rem; ++r) {
          const Real updated = w.at(order[k + r], order[k + c]) - l[r] * c_c;
          w.set(order[k + r], order[k + c], updated);
        }
      }
      k += 1;
    } else {
      // Bring the block to positions (k, k+1); choice indices are relative
      // to the view and satisfy i < j, so the second swap target is intact.
      std::swap(order[k], order[k + choice.i]);
      std::swap(order[k + 1], order[k + choice.j]);
      const Real b11 = choice.a_ii;
      const Real b21 = choice.a_ij;
      const Real b22 = choice.a_jj;
      const Real det = b11 * b22 - b21 * b21;
      std::vector<Real> l1(static_cast<std::size_t>(rem), 0.0);
      std::vector<Real> l2(static_cast<std::size_t>(rem), 0.0);
      for (Index r = 2; r < rem; ++r) {
        const Real c1 = w.at(order[k + r], order[k]);
        const Real c2 = w.at(order[k + r], order[k + 1]);
        l1[r] = (c1 * b22 - c2 * b21) / det;
        l2[r] = (c2 * b11 - c1 * b21) / det;
        if (l1[r] != 0.0) staged[k].push_back({order[k + r], l1[r]});
        if (l2[r] != 0.0) staged[k + 1].push_back({order[k + r], l2[r]});
      }
      out.blocks.push_two_by_two(b11, b21, b22);
      for (Index c = 2; c < rem; ++c) {
        const Real c1 = w.at(order[k + c], order[k]);
        const Real c2 = w.at(order[k + c], order[k + 1]);
        for (Index r = c; r < rem; ++r) {
          const Real updated =
              w.at(order[k + r], order[k + c]) - (l1[r] * c1 + l2[r] * c2);
          w.set(order[k + r], order[k + c], updated);
        }
      }
      k += 2;
    }
  }

  std::vector<Index> pos_of(static_cast<std::size_t>(n));
  for (Index t = 0; t < n; ++t) pos_of[order[t]] = t;
  for (Index j = 0; j < n; ++j) {
    std::vector<Entry> col;
    col.reserve(staged[j].size());
    for (const auto& [original, value] : staged[j]) col.push_back({pos_of[original], value});
    out.lower.set_column(j, std::move(col));
  }

  out.perm = Permutation::from_inverse(order);
  return out;
}

}  // namespace sparseldl

#endif  // SPARSELDL_DENSE_FALLBACK_HPP_
