#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spgemm/csr.hpp"

namespace spgemm {

/// Dense-vector sparse accumulator sized to the column count of the product.
/// Reused across rows; clear() only touches the columns written since the
/// last clear.
template <class T>
class SparseAccumulator {
 public:
  explicit SparseAccumulator(Index num_cols) : values_(num_cols, T{}), occupied_(num_cols, 0) {}

  void accumulate(Index col, T value) {
    if (!occupied_[col]) {
      occupied_[col] = 1;
      values_[col] = value;
      touched_.push_back(col);
    } else {
      values_[col] += value;
    }
  }

  /// Appends the accumulated entries in ascending column order and resets.
  void drain_sorted(std::vector<Index>& cols, std::vector<T>& vals);

  std::size_t size() const { return touched_.size(); }

 private:
  std::vector<T> values_;
  std::vector<unsigned char> occupied_;
  std::vector<Index> touched_;
};

/// Row-wise Gustavson product. Products are accumulated in (j ascending,
/// k ascending) order; structural zeros produced by cancellation are kept.
template <class T>
CsrMatrix<T> spgemm_gustavson(const CsrMatrix<T>& a, const CsrMatrix<T>& b);

inline constexpr std::uint64_t kDenseCheckLimit = std::uint64_t{1} << 24;

/// Dense triple-loop product with a separate structural mask. Throws Error
/// when rows(a) * cols(b) exceeds kDenseCheckLimit.
template <class T>
CsrMatrix<T> spgemm_dense_check(const CsrMatrix<T>& a, const CsrMatrix<T>& b);

/// 2 * (number of candidate products a_ij * b_jk).
template <class T>
std::uint64_t count_flops(const CsrMatrix<T>& a, const CsrMatrix<T>& b);

template <class T>
constexpr double default_tolerance() {
  return sizeof(T) == sizeof(float) ? 1e-5 : 1e-12;
}

struct Comparison {
  bool shape_equal = true;
  bool pattern_equal = true;
  std::size_t value_mismatches = 0;
  double max_relative_error = 0.0;
  std::string first_difference;

  bool ok() const { return shape_equal && pattern_equal && value_mismatches == 0; }
};

/// Exact pattern comparison plus per-entry relative value check.
template <class T>
Comparison compare(const CsrMatrix<T>& actual, const CsrMatrix<T>& expected,
                   double relative_tolerance = default_tolerance<T>());

/// Structure-only comparison.
template <>
Comparison compare(const CsrMatrix<PatternValue>& actual, const CsrMatrix<PatternValue>& expected,
                   double relative_tolerance);

}  // namespace spgemm
