#include "spgemm/galerkin.hpp"

#include <chrono>

namespace spgemm {

AggregationMap aggregate_linear(Index n, Index block) {
  if (block == 0) throw Error("aggregation: block size must be positive");
  AggregationMap map;
  map.aggregate_of.resize(n);
  for (Index i = 0; i < n; ++i) map.aggregate_of[i] = i / block;
  map.num_aggregates = n == 0 ? 0 : (n - 1) / block + 1;
  return map;
}

std::vector<Index> coarse_grid_dims(const std::vector<Index>& dims, Index block) {
  if (block == 0) throw Error("aggregation: block size must be positive");
  std::vector<Index> out;
  for (Index d : dims) out.push_back((d + block - 1) / block);
  return out;
}

AggregationMap aggregate_grid(const std::vector<Index>& dims, Index block) {
  if (dims.empty() || dims.size() > 3) throw Error("aggregation: grids have 1 to 3 dimensions");
  const auto coarse = coarse_grid_dims(dims, block);
  std::vector<Index> ext(3, 1), cext(3, 1);
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (dims[d] == 0) throw Error("aggregation: empty grid extent");
    ext[d] = dims[d];
    cext[d] = coarse[d];
  }
  AggregationMap map;
  map.aggregate_of.reserve(static_cast<std::size_t>(ext[0]) * ext[1] * ext[2]);
  for (Index z = 0; z < ext[2]; ++z)
    for (Index y = 0; y < ext[1]; ++y)
      for (Index x = 0; x < ext[0]; ++x)
        map.aggregate_of.push_back(x / block + cext[0] * (y / block + cext[1] * (z / block)));
  map.num_aggregates = cext[0] * cext[1] * cext[2];
  return map;
}

template <class T>
CsrMatrix<T> prolongator(const AggregationMap& map) {
  const auto n = static_cast<Index>(map.aggregate_of.size());
  std::vector<Offset> row_ptr(static_cast<std::size_t>(n) + 1);
  for (Index i = 0; i <= n; ++i) row_ptr[i] = i;
  std::vector<char> seen(map.num_aggregates, 0);
  for (Index agg : map.aggregate_of) {
    if (agg >= map.num_aggregates) throw Error("aggregation: aggregate id out of range");
    seen[agg] = 1;
  }
  for (char s : seen) {
    if (!s) throw Error("aggregation: empty aggregate");
  }
  return CsrMatrix<T>(n, map.num_aggregates, std::move(row_ptr), map.aggregate_of,
                      std::vector<T>(n, T(1)));
}

template <class T>
CsrMatrix<T> build_prolongator(const CsrMatrix<T>& a, Index block) {
  if (a.num_rows() != a.num_cols()) throw DimensionMismatch("build_prolongator: matrix not square");
  return prolongator<T>(aggregate_linear(a.num_rows(), block));
}

template <class T>
CsrMatrix<T> transpose(const CsrMatrix<T>& m) {
  std::vector<Offset> row_ptr(static_cast<std::size_t>(m.num_cols()) + 1, 0);
  for (Index c : m.col_idx()) ++row_ptr[c + 1];
  for (Index c = 0; c < m.num_cols(); ++c) row_ptr[c + 1] += row_ptr[c];
  std::vector<Offset> cursor(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<Index> cols(m.nnz());
  std::vector<T> vals(m.nnz());
  // scanning rows in order leaves every output row sorted
  for (Index i = 0; i < m.num_rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t p = 0; p < r.size(); ++p) {
      const auto dst = cursor[r.cols[p]]++;
      cols[dst] = i;
      vals[dst] = r.values[p];
    }
  }
  return CsrMatrix<T>(m.num_cols(), m.num_rows(), std::move(row_ptr), std::move(cols),
                      std::move(vals));
}

std::string to_string(GalerkinOrder o) {
  return o == GalerkinOrder::kRAThenP ? "RA_then_P" : "AP_then_R";
}

template <class T>
GalerkinResult<T> galerkin_product(const CsrMatrix<T>& p, const CsrMatrix<T>& a, GalerkinOrder order,
                                   const SpgemmOptions& options) {
  if (a.num_rows() != a.num_cols()) throw DimensionMismatch("galerkin_product: A is not square");
  if (a.num_cols() != p.num_rows()) {
    throw DimensionMismatch("galerkin_product: P has " + std::to_string(p.num_rows()) +
                            " rows, A has " + std::to_string(a.num_cols()) + " columns");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = transpose(p);
  GalerkinResult<T> out;
  out.transpose_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (order == GalerkinOrder::kRAThenP) {
    auto ra = spgemm(r, a, options);
    auto rap = spgemm(ra.c, p, options);
    out.first = std::move(ra.report);
    out.second = std::move(rap.report);
    out.coarse = std::move(rap.c);
  } else {
    auto ap = spgemm(a, p, options);
    auto rap = spgemm(r, ap.c, options);
    out.first = std::move(ap.report);
    out.second = std::move(rap.report);
    out.coarse = std::move(rap.c);
  }
  return out;
}

template <class T>
std::vector<GalerkinLevel<T>> galerkin_hierarchy(const CsrMatrix<T>& a, std::vector<Index> dims,
                                                 Index block, int levels,
                                                 const SpgemmOptions& options, Index min_rows,
                                                 double tolerance) {
  std::vector<GalerkinLevel<T>> out;
  CsrMatrix<T> current = a;
  for (int level = 0; level < levels && current.num_rows() >= min_rows; ++level) {
    const auto map = aggregate_grid(dims, block);
    if (map.aggregate_of.size() != current.num_rows()) {
      throw DimensionMismatch("galerkin_hierarchy: grid extents do not match the operator");
    }
    const auto p = prolongator<T>(map);
    GalerkinLevel<T> lvl;
    lvl.fine_rows = current.num_rows();
    lvl.ra_then_p = galerkin_product(p, current, GalerkinOrder::kRAThenP, options);
    lvl.ap_then_r = galerkin_product(p, current, GalerkinOrder::kAPThenR, options);
    lvl.agreement = compare(lvl.ra_then_p.coarse, lvl.ap_then_r.coarse, tolerance);
    lvl.coarse_rows = lvl.ra_then_p.coarse.num_rows();
    dims = coarse_grid_dims(dims, block);
    lvl.coarse_dims = dims;
    current = lvl.ra_then_p.coarse;
    out.push_back(std::move(lvl));
  }
  return out;
}

#define SPGEMM_INSTANTIATE_GALERKIN(T)                                                         \
  template CsrMatrix<T> prolongator(const AggregationMap&);                                    \
  template CsrMatrix<T> build_prolongator(const CsrMatrix<T>&, Index);                         \
  template CsrMatrix<T> transpose(const CsrMatrix<T>&);                                        \
  template GalerkinResult<T> galerkin_product(const CsrMatrix<T>&, const CsrMatrix<T>&,        \
                                              GalerkinOrder, const SpgemmOptions&);            \
  template std::vector<GalerkinLevel<T>> galerkin_hierarchy(const CsrMatrix<T>&,               \
                                                            std::vector<Index>, Index, int,    \
                                                            const SpgemmOptions&, Index, double);

SPGEMM_INSTANTIATE_GALERKIN(float)
SPGEMM_INSTANTIATE_GALERKIN(double)

}  // namespace spgemm
