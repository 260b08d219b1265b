#include "spgemm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spgemm {
namespace {

template <class A, class B>
void require_compatible(const CsrMatrix<A>& a, const CsrMatrix<B>& b, const char* what) {
  if (a.num_cols() != b.num_rows()) {
    std::ostringstream os;
    os << what << ": cannot multiply " << a.num_rows() << "x" << a.num_cols() << " by "
       << b.num_rows() << "x" << b.num_cols();
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

template <class T>
void SparseAccumulator<T>::drain_sorted(std::vector<Index>& cols, std::vector<T>& vals) {
  std::sort(touched_.begin(), touched_.end());
  for (Index c : touched_) {
    cols.push_back(c);
    vals.push_back(values_[c]);
    occupied_[c] = 0;
  }
  touched_.clear();
}

template <class T>
CsrMatrix<T> spgemm_gustavson(const CsrMatrix<T>& a, const CsrMatrix<T>& b) {
  require_compatible(a, b, "spgemm_gustavson");
  SparseAccumulator<T> spa(b.num_cols());
  std::vector<Offset> row_ptr(static_cast<std::size_t>(a.num_rows()) + 1, 0);
  std::vector<Index> cols;
  std::vector<T> vals;
  for (Index i = 0; i < a.num_rows(); ++i) {
    const auto ai = a.row(i);
    for (std::size_t p = 0; p < ai.size(); ++p) {
      const auto bj = b.row(ai.cols[p]);
      for (std::size_t q = 0; q < bj.size(); ++q) spa.accumulate(bj.cols[q], ai.values[p] * bj.values[q]);
    }
    spa.drain_sorted(cols, vals);
    row_ptr[i + 1] = cols.size();
  }
  return CsrMatrix<T>(a.num_rows(), b.num_cols(), std::move(row_ptr), std::move(cols),
                      std::move(vals));
}

template <class T>
CsrMatrix<T> spgemm_dense_check(const CsrMatrix<T>& a, const CsrMatrix<T>& b) {
  require_compatible(a, b, "spgemm_dense_check");
  const std::uint64_t m = a.num_rows(), k = a.num_cols(), n = b.num_cols();
  if (m * n > kDenseCheckLimit || m * k > kDenseCheckLimit || k * n > kDenseCheckLimit) {
    throw Error("spgemm_dense_check: operands too large for the dense reference");
  }
  const auto da = to_dense(a);
  const auto db = to_dense(b);
  // structure is tracked separately from values so that cancellation keeps
  // the entry
  std::vector<unsigned char> sa(m * k, 0), sb(k * n, 0);
  for (Index i = 0; i < a.num_rows(); ++i)
    for (Index c : a.row(i).cols) sa[i * k + c] = 1;
  for (Index i = 0; i < b.num_rows(); ++i)
    for (Index c : b.row(i).cols) sb[i * n + c] = 1;

  std::vector<Offset> row_ptr(m + 1, 0);
  std::vector<Index> cols;
  std::vector<T> vals;
  std::vector<T> acc(n);
  std::vector<unsigned char> hit(n);
  for (std::uint64_t i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), T(0));
    std::fill(hit.begin(), hit.end(), 0);
    for (std::uint64_t j = 0; j < k; ++j) {
      if (!sa[i * k + j]) continue;
      for (std::uint64_t c = 0; c < n; ++c) {
        if (!sb[j * n + c]) continue;
        const T prod = da[i * k + j] * db[j * n + c];
        acc[c] = hit[c] ? acc[c] + prod : prod;
        hit[c] = 1;
      }
    }
    for (std::uint64_t c = 0; c < n; ++c) {
      if (!hit[c]) continue;
      cols.push_back(static_cast<Index>(c));
      vals.push_back(acc[c]);
    }
    row_ptr[i + 1] = cols.size();
  }
  return CsrMatrix<T>(a.num_rows(), b.num_cols(), std::move(row_ptr), std::move(cols),
                      std::move(vals));
}

template <class T>
std::uint64_t count_flops(const CsrMatrix<T>& a, const CsrMatrix<T>& b) {
  require_compatible(a, b, "count_flops");
  std::uint64_t products = 0;
  for (Index c : a.col_idx()) products += b.row_nnz(c);
  return 2 * products;
}

template <class T>
Comparison compare(const CsrMatrix<T>& actual, const CsrMatrix<T>& expected,
                   double relative_tolerance) {
  Comparison out;
  auto note = [&out](const std::string& msg) {
    if (out.first_difference.empty()) out.first_difference = msg;
  };
  if (actual.num_rows() != expected.num_rows() || actual.num_cols() != expected.num_cols()) {
    out.shape_equal = false;
    out.pattern_equal = false;
    note("shape differs");
    return out;
  }
  for (Index i = 0; i < expected.num_rows(); ++i) {
    const auto x = actual.row(i);
    const auto y = expected.row(i);
    if (x.size() != y.size() || !std::equal(x.cols.begin(), x.cols.end(), y.cols.begin())) {
      out.pattern_equal = false;
      note("pattern differs in row " + std::to_string(i));
      continue;
    }
    for (std::size_t p = 0; p < x.size(); ++p) {
      const double xv = static_cast<double>(x.values[p]);
      const double yv = static_cast<double>(y.values[p]);
      const double scale = std::max(std::abs(xv), std::abs(yv));
      const double rel = scale == 0.0 ? 0.0 : std::abs(xv - yv) / scale;
      if (!(rel <= relative_tolerance)) {  // also catches NaN
        ++out.value_mismatches;
        std::ostringstream os;
        os << "value differs at (" << i << ", " << x.cols[p] << "): " << xv << " vs " << yv;
        note(os.str());
      }
      if (rel > out.max_relative_error || std::isnan(rel)) out.max_relative_error = rel;
    }
  }
  return out;
}

template <>
Comparison compare(const CsrMatrix<PatternValue>& actual, const CsrMatrix<PatternValue>& expected,
                   double) {
  Comparison out;
  if (actual.num_rows() != expected.num_rows() || actual.num_cols() != expected.num_cols()) {
    out.shape_equal = out.pattern_equal = false;
    out.first_difference = "shape differs";
    return out;
  }
  out.pattern_equal = actual.row_ptr().size() == expected.row_ptr().size() &&
                      std::ranges::equal(actual.row_ptr(), expected.row_ptr()) &&
                      std::ranges::equal(actual.col_idx(), expected.col_idx());
  if (!out.pattern_equal) out.first_difference = "pattern differs";
  return out;
}

#define SPGEMM_INSTANTIATE_ORACLE(T)                                                       \
  template class SparseAccumulator<T>;                                                     \
  template CsrMatrix<T> spgemm_gustavson(const CsrMatrix<T>&, const CsrMatrix<T>&);        \
  template std::uint64_t count_flops(const CsrMatrix<T>&, const CsrMatrix<T>&);

SPGEMM_INSTANTIATE_ORACLE(float)
SPGEMM_INSTANTIATE_ORACLE(double)
SPGEMM_INSTANTIATE_ORACLE(PatternValue)

template CsrMatrix<float> spgemm_dense_check(const CsrMatrix<float>&, const CsrMatrix<float>&);
template CsrMatrix<double> spgemm_dense_check(const CsrMatrix<double>&, const CsrMatrix<double>&);
template Comparison compare(const CsrMatrix<float>&, const CsrMatrix<float>&, double);
template Comparison compare(const CsrMatrix<double>&, const CsrMatrix<double>&, double);

}  // namespace spgemm
