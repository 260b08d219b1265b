#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace spgemm {

// Row/column indices are 32-bit; offsets into nnz-sized arrays are 64-bit so
// that the intermediate product size of large inputs does not overflow.
using Index = std::uint32_t;
using Offset = std::uint64_t;

/// Column value reserved as the "+infinity" padding key in sorting networks.
inline constexpr Index kSentinelColumn = std::numeric_limits<Index>::max();

/// Structure-only scalar. Arithmetic on it is a no-op, which lets the numeric
/// pipeline double as a boolean (pattern) SpGEMM.
struct PatternValue {
  friend constexpr PatternValue operator*(PatternValue, PatternValue) { return {}; }
  friend constexpr PatternValue operator+(PatternValue, PatternValue) { return {}; }
  constexpr PatternValue& operator+=(PatternValue) { return *this; }
  friend constexpr bool operator==(PatternValue, PatternValue) { return true; }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace spgemm
