#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spgemm/types.hpp"

namespace spgemm {

template <class T>
struct RowView {
  std::span<const Index> cols;
  std::span<const T> values;

  std::size_t size() const { return cols.size(); }
  bool empty() const { return cols.empty(); }
};

/// Compressed sparse row matrix.
///
/// The constructor stores whatever it is given; use validate() or
/// make_checked() when the arrays come from an untrusted source. Once built the
/// matrix is immutable and can be shared freely between threads.
template <class T>
class CsrMatrix {
 public:
  using value_type = T;

  CsrMatrix() : row_ptr_(1, 0) {}
  CsrMatrix(Index num_rows, Index num_cols, std::vector<Offset> row_ptr,
            std::vector<Index> col_idx, std::vector<T> values)
      : num_rows_(num_rows),
        num_cols_(num_cols),
        row_ptr_(std::move(row_ptr)),
        col_idx_(std::move(col_idx)),
        values_(std::move(values)) {}

  Index num_rows() const { return num_rows_; }
  Index num_cols() const { return num_cols_; }
  Offset nnz() const { return col_idx_.size(); }

  std::span<const Offset> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const T> values() const { return values_; }

  Offset row_nnz(Index i) const { return row_ptr_[i + 1] - row_ptr_[i]; }

  RowView<T> row(Index i) const {
    const auto begin = row_ptr_[i];
    const auto len = row_ptr_[i + 1] - begin;
    return {std::span<const Index>(col_idx_).subspan(begin, len),
            std::span<const T>(values_).subspan(begin, len)};
  }

  /// Bytes held by the three CSR arrays.
  std::size_t storage_bytes() const {
    return row_ptr_.size() * sizeof(Offset) + col_idx_.size() * sizeof(Index) +
           values_.size() * sizeof(T);
  }

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  Index num_rows_ = 0;
  Index num_cols_ = 0;
  std::vector<Offset> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<T> values_;
};

template <class T>
struct CooTriplet {
  Index row;
  Index col;
  T value;
};

enum class ViolationKind {
  kRowPtrLength,
  kRowPtrStart,
  kNonMonotoneRowPtr,
  kNnzMismatch,
  kValueLength,
  kUnsortedRow,
  kDuplicateColumn,
  kColumnOutOfRange,
};

struct Violation {
  ViolationKind kind;
  Index row;  // offending row, or 0 for whole-matrix problems
  std::string message;
};

std::string to_string(ViolationKind kind);

/// Lists every broken CSR invariant; empty iff the matrix is well formed.
template <class T>
std::vector<Violation> validate(const CsrMatrix<T>& m);

/// Builds a matrix and throws Error if it violates any invariant.
template <class T>
CsrMatrix<T> make_checked(Index num_rows, Index num_cols, std::vector<Offset> row_ptr,
                          std::vector<Index> col_idx, std::vector<T> values);

struct TripletStats {
  std::size_t duplicates_fused = 0;
};

/// Assembles CSR from unordered triplets. Entries sharing a coordinate are
/// summed. Throws Error on out-of-range coordinates.
template <class T>
CsrMatrix<T> from_triplets(Index num_rows, Index num_cols, std::vector<CooTriplet<T>> triplets,
                           TripletStats* stats = nullptr);

template <class T>
CsrMatrix<T> identity(Index n);

/// Same structure, values dropped.
template <class T>
CsrMatrix<PatternValue> pattern_of(const CsrMatrix<T>& m);

template <class To, class From>
CsrMatrix<To> convert(const CsrMatrix<From>& m) {
  std::vector<To> values(m.values().begin(), m.values().end());
  return CsrMatrix<To>(m.num_rows(), m.num_cols(),
                       std::vector<Offset>(m.row_ptr().begin(), m.row_ptr().end()),
                       std::vector<Index>(m.col_idx().begin(), m.col_idx().end()),
                       std::move(values));
}

/// Row-major dense copy; intended for small test instances only.
template <class T>
std::vector<T> to_dense(const CsrMatrix<T>& m);

}  // namespace spgemm
