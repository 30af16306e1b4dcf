#ifndef SPARSELDL_MATRIX_MARKET_HPP_
#define SPARSELDL_MATRIX_MARKET_HPP_

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sparseldl/factorization.hpp"
#include "sparseldl/sparse_matrix.hpp"
#include "sparseldl/types.hpp"

namespace sparseldl {

// Shortest-exact decimal rendering used for all numeric file output; the
// %.17g form round-trips IEEE doubles, so re-reading reproduces the bits.
inline std::string format_real(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

namespace internal {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline Real parse_real(const std::string& token, const char* what) {
  Real value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;  // from_chars rejects a leading plus
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw MatrixMarketError(std::string("cannot parse ") + what + ": '" + token + "'");
  }
  return value;
}

inline long long parse_int(const std::string& token, const char* what) {
  long long value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw MatrixMarketError(std::string("cannot parse ") + what + ": '" + token + "'");
  }
  return value;
}

// Next non-comment, non-blank line; false at end of stream.
inline bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t pos = 0;
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos == line.size() || line[pos] == '%') continue;
    return true;
  }
  return false;
}

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) tokens.push_back(t);
  return tokens;
}

}  // namespace internal

// Reads a Matrix Market coordinate file describing a symmetric matrix.
// `symmetry general` files must list both triangles and are validated
// entry-by-entry; `symmetry symmetric` files list the lower triangle, which
// is expanded. Values must be real.
inline SymmetricSparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw MatrixMarketError("empty input");
  std::vector<std::string> header = internal::split_tokens(line);
  if (header.size() < 5 || internal::lower(header[0]) != "%%matrixmarket") {
    throw MatrixMarketError("missing %%MatrixMarket header");
  }
  if (internal::lower(header[1]) != "matrix" || internal::lower(header[2]) != "coordinate") {
    throw MatrixMarketError("only 'matrix coordinate' inputs are supported");
  }
  if (internal::lower(header[3]) != "real") {
    throw MatrixMarketError("only real-valued matrices are supported");
  }
  const std::string symmetry = internal::lower(header[4]);
  if (symmetry != "general" && symmetry != "symmetric") {
    throw MatrixMarketError("symmetry must be 'general' or 'symmetric'");
  }
  const bool symmetric = symmetry == "symmetric";

  if (!internal::next_data_line(in, line)) throw MatrixMarketError("missing size line");
  std::vector<std::string> size_tokens = internal::split_tokens(line);
  if (size_tokens.size() != 3) throw MatrixMarketError("malformed size line");
  const long long rows = internal::parse_int(size_tokens[0], "row count");
  const long long cols = internal::parse_int(size_tokens[1], "column count");
  const long long count = internal::parse_int(size_tokens[2], "entry count");
  if (rows != cols) throw MatrixMarketError("matrix must be square");
  if (rows < 0 || count < 0) throw MatrixMarketError("negative size");
  const Index n = static_cast<Index>(rows);

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(count));
  for (long long k = 0; k < count; ++k) {
    if (!internal::next_data_line(in, line)) {
      throw MatrixMarketError("fewer entries than the size line promises");
    }
    std::vector<std::string> tokens = internal::split_tokens(line);
    if (tokens.size() != 3) throw MatrixMarketError("entry line must be 'i j value'");
    const long long i = internal::parse_int(tokens[0], "row index");
    const long long j = internal::parse_int(tokens[1], "column index");
    const Real v = internal::parse_real(tokens[2], "value");
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw MatrixMarketError("entry index out of range");
    }
    if (symmetric && i < j) {
      throw MatrixMarketError("symmetric file stores an entry above the diagonal");
    }
    triplets.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v});
  }
  if (internal::next_data_line(in, line)) {
    throw MatrixMarketError("more entries than the size line promises");
  }

  if (!symmetric) {
    // A general file must spell out both triangles itself.
    std::vector<std::pair<Index, Index>> keys;
    keys.reserve(triplets.size());
    for (const Triplet& t : triplets) keys.push_back({t.row, t.col});
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (const auto& [i, j] : keys) {
      if (i != j && !std::binary_search(keys.begin(), keys.end(), std::pair<Index, Index>{j, i})) {
        throw AsymmetryError("general file is missing the mirror of an off-diagonal entry");
      }
    }
  }
  return SymmetricSparseMatrix::from_triplets(n, triplets);
}

inline SymmetricSparseMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixMarketError("cannot open '" + path + "' for reading");
  return read_matrix_market(in);
}

// Writes the lower triangle in 'symmetric' coordinate format, column-major.
inline void write_matrix_market(std::ostream& out, const SymmetricSparseMatrix& m) {
  std::int64_t lower_count = 0;
  for (Index j = 0; j < m.dim(); ++j) {
    for (const Entry& e : m.column(j)) {
      if (e.row >= j) ++lower_count;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.dim() << " " << m.dim() << " " << lower_count << "\n";
  for (Index j = 0; j < m.dim(); ++j) {
    for (const Entry& e : m.column(j)) {
      if (e.row < j) continue;
      out << (e.row + 1) << " " << (j + 1) << " " << format_real(e.value) << "\n";
    }
  }
}

// Writes a unit lower triangular factor in 'general' coordinate format with
// the unit diagonal spelled out.
inline void write_matrix_market(std::ostream& out, const SparseLowerTriangular& l) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << l.dim() << " " << l.dim() << " " << l.nnz() << "\n";
  for (Index j = 0; j < l.dim(); ++j) {
    out << (j + 1) << " " << (j + 1) << " 1\n";
    for (const Entry& e : l.column(j)) {
      out << (e.row + 1) << " " << (j + 1) << " " << format_real(e.value) << "\n";
    }
  }
}

inline void write_matrix_market_file(const std::string& path, const SymmetricSparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw MatrixMarketError("cannot open '" + path + "' for writing");
  write_matrix_market(out, m);
}

inline void write_matrix_market_file(const std::string& path, const SparseLowerTriangular& l) {
  std::ofstream out(path);
  if (!out) throw MatrixMarketError("cannot open '" + path + "' for writing");
  write_matrix_market(out, l);
}

// Plain-text vector: one value per line; blank lines and %-comments skipped.
inline std::vector<Real> read_vector(std::istream& in) {
  std::vector<Real> out;
  std::string line;
  while (internal::next_data_line(in, line)) {
    std::vector<std::string> tokens = internal::split_tokens(line);
    if (tokens.size() != 1) throw std::runtime_error("vector line must hold exactly one value");
    out.push_back(internal::parse_real(tokens[0], "vector value"));
  }
  return out;
}

inline std::vector<Real> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_vector(in);
}

inline void write_vector(std::ostream& out, std::span<const Real> v) {
  for (Real x : v) out << format_real(x) << "\n";
}

inline void write_vector_file(const std::string& path, std::span<const Real> v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_vector(out, v);
}

}  // namespace sparseldl

#endif  // SPARSELDL_MATRIX_MARKET_HPP_
