#include "spgemm/csr.hpp"

#include <algorithm>
#include <sstream>

namespace spgemm {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kRowPtrLength: return "row_ptr length";
    case ViolationKind::kRowPtrStart: return "row_ptr[0] != 0";
    case ViolationKind::kNonMonotoneRowPtr: return "non-monotone row_ptr";
    case ViolationKind::kNnzMismatch: return "nnz mismatch";
    case ViolationKind::kValueLength: return "value length";
    case ViolationKind::kUnsortedRow: return "unsorted row";
    case ViolationKind::kDuplicateColumn: return "duplicate column";
    case ViolationKind::kColumnOutOfRange: return "column out of range";
  }
  return "unknown";
}

template <class T>
std::vector<Violation> validate(const CsrMatrix<T>& m) {
  std::vector<Violation> out;
  auto add = [&out](ViolationKind kind, Index row, std::string msg) {
    out.push_back({kind, row, std::move(msg)});
  };

  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  if (rp.size() != static_cast<std::size_t>(m.num_rows()) + 1) {
    std::ostringstream os;
    os << "row_ptr has " << rp.size() << " entries, expected " << m.num_rows() + 1;
    add(ViolationKind::kRowPtrLength, 0, os.str());
    return out;  // nothing below is meaningful
  }
  if (rp[0] != 0) add(ViolationKind::kRowPtrStart, 0, "row_ptr[0] = " + std::to_string(rp[0]));
  if (rp.back() != ci.size()) {
    std::ostringstream os;
    os << "row_ptr[n] = " << rp.back() << " but col_idx has " << ci.size() << " entries";
    add(ViolationKind::kNnzMismatch, m.num_rows(), os.str());
  }
  if (m.values().size() != ci.size()) {
    add(ViolationKind::kValueLength, 0,
        "values has " + std::to_string(m.values().size()) + " entries");
  }

  bool monotone = true;
  for (Index i = 0; i < m.num_rows(); ++i) {
    if (rp[i + 1] < rp[i]) {
      add(ViolationKind::kNonMonotoneRowPtr, i, "row_ptr decreases at row " + std::to_string(i));
      monotone = false;
    }
  }
  if (!monotone || rp.back() > ci.size()) return out;

  for (Index i = 0; i < m.num_rows(); ++i) {
    bool unsorted = false;
    bool duplicate = false;
    bool out_of_range = false;
    for (Offset p = rp[i]; p < rp[i + 1]; ++p) {
      if (ci[p] >= m.num_cols()) out_of_range = true;
      if (p > rp[i]) {
        if (ci[p] < ci[p - 1]) unsorted = true;
        if (ci[p] == ci[p - 1]) duplicate = true;
      }
    }
    const auto where = " in row " + std::to_string(i);
    if (out_of_range) add(ViolationKind::kColumnOutOfRange, i, "column index >= num_cols" + where);
    if (unsorted) add(ViolationKind::kUnsortedRow, i, "columns not ascending" + where);
    if (duplicate) add(ViolationKind::kDuplicateColumn, i, "repeated column" + where);
  }
  return out;
}

template <class T>
CsrMatrix<T> make_checked(Index num_rows, Index num_cols, std::vector<Offset> row_ptr,
                          std::vector<Index> col_idx, std::vector<T> values) {
  CsrMatrix<T> m(num_rows, num_cols, std::move(row_ptr), std::move(col_idx), std::move(values));
  const auto violations = validate(m);
  if (!violations.empty()) {
    std::string msg = "invalid CSR matrix:";
    for (const auto& v : violations) msg += " [" + v.message + "]";
    throw Error(msg);
  }
  return m;
}

template <class T>
CsrMatrix<T> from_triplets(Index num_rows, Index num_cols, std::vector<CooTriplet<T>> triplets,
                           TripletStats* stats) {
  for (const auto& t : triplets) {
    if (t.row >= num_rows || t.col >= num_cols) {
      throw Error("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                  ") outside " + std::to_string(num_rows) + "x" + std::to_string(num_cols));
    }
  }
  // stable so that duplicates are summed in file order
  std::stable_sort(triplets.begin(), triplets.end(), [](const auto& x, const auto& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });

  std::vector<Offset> row_ptr(static_cast<std::size_t>(num_rows) + 1, 0);
  std::vector<Index> cols;
  std::vector<T> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  std::size_t fused = 0;
  for (std::size_t p = 0; p < triplets.size(); ++p) {
    const auto& t = triplets[p];
    if (p > 0 && triplets[p - 1].row == t.row && triplets[p - 1].col == t.col) {
      vals.back() += t.value;
      ++fused;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++row_ptr[t.row + 1];
  }
  for (Index i = 0; i < num_rows; ++i) row_ptr[i + 1] += row_ptr[i];
  if (stats) stats->duplicates_fused = fused;
  return CsrMatrix<T>(num_rows, num_cols, std::move(row_ptr), std::move(cols), std::move(vals));
}

template <class T>
CsrMatrix<T> identity(Index n) {
  std::vector<Offset> row_ptr(static_cast<std::size_t>(n) + 1);
  std::vector<Index> cols(n);
  for (Index i = 0; i <= n; ++i) row_ptr[i] = i;
  for (Index i = 0; i < n; ++i) cols[i] = i;
  return CsrMatrix<T>(n, n, std::move(row_ptr), std::move(cols), std::vector<T>(n, T(1)));
}

template <class T>
CsrMatrix<PatternValue> pattern_of(const CsrMatrix<T>& m) {
  return CsrMatrix<PatternValue>(m.num_rows(), m.num_cols(),
                                 std::vector<Offset>(m.row_ptr().begin(), m.row_ptr().end()),
                                 std::vector<Index>(m.col_idx().begin(), m.col_idx().end()),
                                 std::vector<PatternValue>(m.nnz()));
}

template <class T>
std::vector<T> to_dense(const CsrMatrix<T>& m) {
  std::vector<T> dense(static_cast<std::size_t>(m.num_rows()) * m.num_cols(), T(0));
  for (Index i = 0; i < m.num_rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t p = 0; p < r.size(); ++p) {
      dense[static_cast<std::size_t>(i) * m.num_cols() + r.cols[p]] = r.values[p];
    }
  }
  return dense;
}

#define SPGEMM_INSTANTIATE_CSR(T)                                                          \
  template std::vector<Violation> validate(const CsrMatrix<T>&);                           \
  template CsrMatrix<T> make_checked(Index, Index, std::vector<Offset>, std::vector<Index>, \
                                     std::vector<T>);                                      \
  template CsrMatrix<PatternValue> pattern_of(const CsrMatrix<T>&);

SPGEMM_INSTANTIATE_CSR(float)
SPGEMM_INSTANTIATE_CSR(double)
SPGEMM_INSTANTIATE_CSR(PatternValue)

template CsrMatrix<float> from_triplets(Index, Index, std::vector<CooTriplet<float>>,
                                        TripletStats*);
template CsrMatrix<double> from_triplets(Index, Index, std::vector<CooTriplet<double>>,
                                         TripletStats*);
template CsrMatrix<float> identity(Index);
template CsrMatrix<double> identity(Index);
template std::vector<float> to_dense(const CsrMatrix<float>&);
template std::vector<double> to_dense(const CsrMatrix<double>&);

}  // namespace spgemm
