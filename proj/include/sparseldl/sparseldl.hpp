#ifndef SPARSELDL_SPARSELDL_HPP_
#define SPARSELDL_SPARSELDL_HPP_

#include "sparseldl/block_diagonal.hpp"
#include "sparseldl/dense_fallback.hpp"
#include "sparseldl/factorization.hpp"
#include "sparseldl/factorize.hpp"
#include "sparseldl/matgen.hpp"
#include "sparseldl/matrix_market.hpp"
#include "sparseldl/metrics.hpp"
#include "sparseldl/permutation.hpp"
#include "sparseldl/pivot_select.hpp"
#include "sparseldl/solve.hpp"
#include "sparseldl/sparse_matrix.hpp"
#include "sparseldl/stability.hpp"
#include "sparseldl/types.hpp"

#endif  // SPARSELDL_SPARSELDL_HPP_
