#ifndef SPARSELDL_SOLVE_HPP_
#define SPARSELDL_SOLVE_HPP_

#include <span>
#include <vector>

#include "sparseldl/factorization.hpp"
#include "sparseldl/types.hpp"

namespace sparseldl {

// Solves A x = b given P^T A P = L B L^T: permute the right-hand side,
// forward substitution, block-diagonal solve, backward substitution,
// permute back.
inline std::vector<Real> solve(const Factorization& f, std::span<const Real> b) {
  const Index n = f.dim();
  if (static_cast<Index>(b.size()) != n) {
    throw DimensionMismatchError("solve: right-hand side length mismatch");
  }
  std::vector<Real> z(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) z[k] = b[f.perm.original(k)];
  f.lower.solve_in_place(z);
  f.blocks.solve_in_place(z);
  f.lower.solve_transpose_in_place(z);
  std::vector<Real> x(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) x[f.perm.original(k)] = z[k];
  return x;
}

// One factorization, many right-hand sides. Results match repeated solve
// calls exactly and preserve input order.
inline std::vector<std::vector<Real>> solve_many(const Factorization& f,
                                                 const std::vector<std::vector<Real>>& rhs) {
  std::vector<std::vector<Real>> out;
  out.reserve(rhs.size());
  for (const auto& b : rhs) out.push_back(solve(f, b));
  return out;
}

}  // namespace sparseldl

#endif  // SPARSELDL_SOLVE_HPP_
