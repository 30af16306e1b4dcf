#ifndef SPARSELDL_STABILITY_HPP_
#define SPARSELDL_STABILITY_HPP_

#include <cmath>
#include <stdexcept>

#include "sparseldl/types.hpp"

namespace sparseldl {

// Threshold parameter for pivot acceptance. Accepted pivots bound every
// entry of the corresponding L columns by 1/alpha in magnitude; larger alpha
// tightens the bound at the cost of rejecting more pivots.
struct StabilityConfig {
  Real alpha = 0.01;

  void validate() const {
    if (!(alpha > 0.0) || alpha > 0.5) {
      throw std::invalid_argument("alpha must lie in (0, 0.5]");
    }
  }
};

// Scalar pivot test: |diag| >= alpha * col_max, where col_max is the largest
// off-diagonal magnitude in the pivot column. A zero diagonal never
// qualifies, even against an all-zero column.
inline bool stable_1x1(Real diag, Real col_max, const StabilityConfig& config) {
  if (diag == 0.0) return false;
  return std::abs(diag) >= config.alpha * col_max;
}

// 2x2 pivot test on the symmetric block [[a_ii, a_ij], [a_ij, a_jj]]. The
// block must be nonsingular and the elementwise product of |block^{-1}| with
// the column maxima (taken over rows outside {i, j}) must stay within
// 1/alpha in both components.
inline bool stable_2x2(Real a_ii, Real a_ij, Real a_jj, Real col_max_i, Real col_max_j,
                       const StabilityConfig& config) {
  const Real det = a_ii * a_jj - a_ij * a_ij;
  if (det == 0.0) return false;
  const Real abs_det = std::abs(det);
  // |block^{-1}| = (1/|det|) * [[|a_jj|, |a_ij|], [|a_ij|, |a_ii|]].
  const Real bound = abs_det / config.alpha;
  const Real row1 = std::abs(a_jj) * col_max_i + std::abs(a_ij) * col_max_j;
  const Real row2 = std::abs(a_ij) * col_max_i + std::abs(a_ii) * col_max_j;
  return row1 <= bound && row2 <= bound;
}

}  // namespace sparseldl

#endif  // SPARSELDL_STABILITY_HPP_
