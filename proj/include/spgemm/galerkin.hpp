#pragma once

#include <string>
#include <vector>

#include "spgemm/csr.hpp"
#include "spgemm/oracle.hpp"
#include "spgemm/pipeline.hpp"

namespace spgemm {

struct AggregationMap {
  std::vector<Index> aggregate_of;  // per fine row
  Index num_aggregates = 0;
};

/// Consecutive runs of `block` rows form one aggregate.
AggregationMap aggregate_linear(Index n, Index block);

/// Tensor-product blocks of `block` points per grid direction (first extent
/// fastest). Aggregates are numbered lexicographically, so the coarse
/// unknowns again form a grid of extents coarse_grid_dims(dims, block).
AggregationMap aggregate_grid(const std::vector<Index>& dims, Index block);
std::vector<Index> coarse_grid_dims(const std::vector<Index>& dims, Index block);

/// Unsmoothed aggregation prolongator: row i holds a single 1 in column
/// aggregate_of[i].
template <class T>
CsrMatrix<T> prolongator(const AggregationMap& map);

/// prolongator(aggregate_linear(n, block)) for a square a.
template <class T>
CsrMatrix<T> build_prolongator(const CsrMatrix<T>& a, Index block);

template <class T>
CsrMatrix<T> transpose(const CsrMatrix<T>& m);

enum class GalerkinOrder { kRAThenP, kAPThenR };

std::string to_string(GalerkinOrder o);

template <class T>
struct GalerkinResult {
  CsrMatrix<T> coarse;
  SpgemmReport first;   // R*A or A*P
  SpgemmReport second;  // (RA)*P or R*(AP)
  double transpose_ms = 0;
};

/// Coarse operator P^T A P with R = P^T formed explicitly.
template <class T>
GalerkinResult<T> galerkin_product(const CsrMatrix<T>& p, const CsrMatrix<T>& a, GalerkinOrder order,
                                   const SpgemmOptions& options = {});

template <class T>
struct GalerkinLevel {
  Index fine_rows = 0;
  Index coarse_rows = 0;
  std::vector<Index> coarse_dims;
  GalerkinResult<T> ra_then_p;
  GalerkinResult<T> ap_then_r;
  Comparison agreement;  // between the two orders
};

/// Repeatedly coarsens a grid operator with aggregate_grid until `levels`
/// products were formed or the operator has fewer than `min_rows` rows.
template <class T>
std::vector<GalerkinLevel<T>> galerkin_hierarchy(const CsrMatrix<T>& a, std::vector<Index> dims,
                                                 Index block, int levels,
                                                 const SpgemmOptions& options = {},
                                                 Index min_rows = 100, double tolerance = 1e-10);

}  // namespace spgemm
