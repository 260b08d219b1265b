#include "spgemm/random.hpp"

#include <random>

namespace spgemm {

template <class T>
CsrMatrix<T> random_csr(Index rows, Index cols, double density, std::uint64_t seed, double lo,
                        double hi) {
  if (density < 0.0 || density > 1.0) throw Error("random_csr: density must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  std::uniform_real_distribution<double> value(lo, hi);
  std::vector<Offset> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<T> vals;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!keep(rng)) continue;
      col_idx.push_back(j);
      vals.push_back(static_cast<T>(value(rng)));
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return CsrMatrix<T>(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(vals));
}

template CsrMatrix<float> random_csr(Index, Index, double, std::uint64_t, double, double);
template CsrMatrix<double> random_csr(Index, Index, double, std::uint64_t, double, double);

}  // namespace spgemm
