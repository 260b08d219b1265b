#pragma once

#include <cstdint>

#include "spgemm/csr.hpp"

namespace spgemm {

/// Bernoulli(density) sparsity pattern with values uniform in [lo, hi).
/// Deterministic for a given seed.
template <class T>
CsrMatrix<T> random_csr(Index rows, Index cols, double density, std::uint64_t seed,
                        double lo = -1.0, double hi = 1.0);

}  // namespace spgemm
