#ifndef SPARSELDL_SPARSE_MATRIX_HPP_
#define SPARSELDL_SPARSE_MATRIX_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sparseldl/permutation.hpp"
#include "sparseldl/types.hpp"

namespace sparseldl {

// Column-oriented storage of a symmetric sparse matrix. Both triangles are
// stored so that any column scan sees the full symmetric pattern. Stored
// values never include exact zeros, and the (i,j)/(j,i) copies of an entry
// are bit-identical.
class SymmetricSparseMatrix {
 public:
  SymmetricSparseMatrix() = default;

  explicit SymmetricSparseMatrix(Index n) : n_(n), columns_(static_cast<std::size_t>(n)) {
    if (n < 0) throw std::invalid_argument("matrix dimension must be nonnegative");
  }

  // Assembles a matrix from (row, col, value) triplets. Duplicates of the
  // same ordered key are summed (in a value-sorted order, so any permutation
  // of the input yields the identical matrix). Supplying only one of
  // (i,j)/(j,i) creates the mirror automatically; supplying both requires the
  // summed values to match exactly.
  static SymmetricSparseMatrix from_triplets(Index n, std::span<const Triplet> entries) {
    SymmetricSparseMatrix m(n);

    std::vector<Triplet> sorted(entries.begin(), entries.end());
    for (const Triplet& t : sorted) {
      if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
        throw std::out_of_range("triplet index out of range");
      }
      if (!std::isfinite(t.value)) {
        throw std::invalid_argument("triplet value must be finite");
      }
    }
    std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
      if (a.col != b.col) return a.col < b.col;
      if (a.row != b.row) return a.row < b.row;
      return a.value < b.value;
    });

    // Collapse duplicate ordered keys. Summation happens in ascending value
    // order, which makes the result independent of the input order.
    std::vector<Triplet> keyed;
    keyed.reserve(sorted.size());
    std::size_t pos = 0;
    while (pos < sorted.size()) {
      std::size_t end = pos;
      Real sum = 0.0;
      while (end < sorted.size() && sorted[end].col == sorted[pos].col &&
             sorted[end].row == sorted[pos].row) {
        sum += sorted[end].value;
        ++end;
      }
      keyed.push_back({sorted[pos].row, sorted[pos].col, sum});
      pos = end;
    }

    // Pair up mirrored keys; `keyed` is sorted by (col, row).
    auto find_value = [&keyed](Index row, Index col) -> const Triplet* {
      auto it = std::lower_bound(
          keyed.begin(), keyed.end(), std::pair<Index, Index>{col, row},
          [](const Triplet& t, const std::pair<Index, Index>& key) {
            if (t.col != key.first) return t.col < key.first;
            return t.row < key.second;
          });
      if (it != keyed.end() && it->col == col && it->row == row) return &*it;
      return nullptr;
    };

    for (const Triplet& t : keyed) {
      if (t.row == t.col) {
        if (t.value != 0.0) m.columns_[t.col].push_back({t.row, t.value});
        continue;
      }
      const Triplet* mirror = find_value(t.col, t.row);
      if (mirror != nullptr) {
        if (std::bit_cast<std::uint64_t>(mirror->value) != std::bit_cast<std::uint64_t>(t.value)) {
          throw AsymmetryError("triplets supply (i,j) and (j,i) with different values");
        }
        if (t.value != 0.0) m.columns_[t.col].push_back({t.row, t.value});
      } else {
        // Single orientation: create both copies.
        if (t.value != 0.0) {
          m.columns_[t.col].push_back({t.row, t.value});
          m.columns_[t.row].push_back({t.col, t.value});
        }
      }
    }

    for (auto& col : m.columns_) {
      std::sort(col.begin(), col.end(),
                [](const Entry& a, const Entry& b) { return a.row < b.row; });
      m.nnz_ += static_cast<std::int64_t>(col.size());
    }
    return m;
  }

  Index dim() const { return n_; }
  std::int64_t nnz() const { return nnz_; }

  const std::vector<Entry>& column(Index j) const { return columns_[j]; }

  // Value of entry (i, j); absent entries read as zero.
  Real value_at(Index i, Index j) const {
    const Entry* e = find(i, j);
    return e != nullptr ? e->value : 0.0;
  }

  bool has_entry(Index i, Index j) const { return find(i, j) != nullptr; }

  // Number of stored entries in column j away from the diagonal.
  Index offdiag_count(Index j) const {
    const auto& col = columns_[j];
    return static_cast<Index>(col.size()) - (find(j, j) != nullptr ? 1 : 0);
  }

  // Largest |value| in column j over rows not in {excl1, excl2}.
  Real col_abs_max_excluding(Index j, Index excl1, Index excl2 = -1) const {
    Real best = 0.0;
    for (const Entry& e : columns_[j]) {
      if (e.row == excl1 || e.row == excl2) continue;
      best = std::max(best, std::abs(e.value));
    }
    return best;
  }

  // Replaces column j wholesale. `entries` must be sorted by row with no
  // zeros; the caller maintains the symmetric mirror.
  void replace_column(Index j, std::vector<Entry> entries) {
    nnz_ += static_cast<std::int64_t>(entries.size()) -
            static_cast<std::int64_t>(columns_[j].size());
    columns_[j] = std::move(entries);
  }

  void clear_column(Index j) {
    nnz_ -= static_cast<std::int64_t>(columns_[j].size());
    columns_[j].clear();
  }

  // Full structural audit; test support.
  void check_invariants() const {
    std::int64_t count = 0;
    for (Index j = 0; j < n_; ++j) {
      Index prev = -1;
      for (const Entry& e : columns_[j]) {
        if (e.row <= prev) throw std::logic_error("column rows not strictly increasing");
        if (e.row < 0 || e.row >= n_) throw std::logic_error("row index out of range");
        if (e.value == 0.0) throw std::logic_error("stored zero value");
        const Entry* mirror = find(j, e.row);
        if (mirror == nullptr ||
            std::bit_cast<std::uint64_t>(mirror->value) != std::bit_cast<std::uint64_t>(e.value)) {
          throw std::logic_error("symmetry violated");
        }
        prev = e.row;
        ++count;
      }
    }
    if (count != nnz_) throw std::logic_error("nnz count out of sync");
  }

  friend bool operator==(const SymmetricSparseMatrix&, const SymmetricSparseMatrix&) = default;

 private:
  const Entry* find(Index i, Index j) const {
    const auto& col = columns_[j];
    auto it = std::lower_bound(col.begin(), col.end(), i,
                               [](const Entry& e, Index row) { return e.row < row; });
    if (it != col.end() && it->row == i) return &*it;
    return nullptr;
  }

  Index n_ = 0;
  std::int64_t nnz_ = 0;
  std::vector<std::vector<Entry>> columns_;
};

// Symmetric reindexing: the result's (i, j) entry is m(p.original(i), p.original(j)).
inline SymmetricSparseMatrix apply_permutation(const SymmetricSparseMatrix& m,
                                               const Permutation& p) {
  if (p.dim() != m.dim()) {
    throw DimensionMismatchError("apply_permutation: permutation dimension mismatch");
  }
  SymmetricSparseMatrix out(m.dim());
  for (Index j = 0; j < m.dim(); ++j) {
    const Index old_col = p.original(j);
    std::vector<Entry> col;
    col.reserve(m.column(old_col).size());
    for (const Entry& e : m.column(old_col)) {
      col.push_back({p.position(e.row), e.value});
    }
    std::sort(col.begin(), col.end(),
              [](const Entry& a, const Entry& b) { return a.row < b.row; });
    out.replace_column(j, std::move(col));
  }
  return out;
}

}  // namespace sparseldl

#endif  // SPARSELDL_SPARSE_MATRIX_HPP_
