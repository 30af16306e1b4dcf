#ifndef SPARSELDL_TYPES_HPP_
#define SPARSELDL_TYPES_HPP_

#include <cstdint>
#include <stdexcept>

namespace sparseldl {

using Index = std::int32_t;
using Real = double;

// One stored entry of a sparse column.
struct Entry {
  Index row;
  Real value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// One assembly input: (row, col, value). Duplicate keys are summed.
struct Triplet {
  Index row;
  Index col;
  Real value;
};

struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AsymmetryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MatrixMarketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sparseldl

#endif  // SPARSELDL_TYPES_HPP_
