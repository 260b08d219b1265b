#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spgemm/csr.hpp"
#include "spgemm/kernels.hpp"
#include "spgemm/temp_matrix.hpp"

namespace spgemm {

/// Row-size thresholds of the binning stage. The defaults give 38 bins in
/// five groups: {0}, {1}, one bin per size 2..32, four bins up to 64 / 128 /
/// 256 / 512, and everything longer.
struct BinConfig {
  Offset group3_max = 32;
  std::array<Offset, 4> group4_upper = {64, 128, 256, 512};
  Offset group5_initial_capacity = 256;

  std::size_t num_bins() const { return static_cast<std::size_t>(group3_max) + 6; }
  std::size_t bin_of(Offset u) const;
  /// 1..5
  int group_of_bin(std::size_t bin) const;
  int group_of(Offset u) const { return group_of_bin(bin_of(u)); }
  /// Throws Error on inconsistent thresholds.
  void check() const;
};

/// Upper bound u_i on nnz(c_i*) for every row of C = A * B.
struct UpperBoundArray {
  std::vector<Offset> u;

  Offset total() const;
};

/// All row indices in one array, segmented into bins (ascending row order
/// within each bin).
struct BinSet {
  std::vector<Index> rows;
  std::vector<std::size_t> offsets;  // num_bins + 1
  std::vector<int> group_of_bin;

  std::size_t num_bins() const { return group_of_bin.size(); }
  std::size_t count(std::size_t bin) const { return offsets[bin + 1] - offsets[bin]; }
  std::span<const Index> bin(std::size_t b) const {
    return std::span<const Index>(rows).subspan(offsets[b], count(b));
  }
};

enum class Strategy { kHybrid, kUpperBound, kPrecise };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& text);

/// Byte totals of the three allocation strategies. Each counts both input
/// matrices plus the storage allocated for the product rows (row offsets and
/// one index + one value per unit of capacity).
struct MemoryFootprint {
  std::uint64_t inputs = 0;
  std::uint64_t precise = 0;
  std::uint64_t upper_bound = 0;
  std::uint64_t hybrid = 0;

  std::uint64_t of(Strategy s) const;
  friend bool operator==(const MemoryFootprint&, const MemoryFootprint&) = default;
};

struct StageTimes {
  double upper_bound_ms = 0;
  double binning_ms = 0;
  double precise_prepass_ms = 0;
  double compute_ms = 0;
  double arrange_ms = 0;

  double total_ms() const {
    return upper_bound_ms + binning_ms + precise_prepass_ms + compute_ms + arrange_ms;
  }
};

struct SpgemmReport {
  Strategy strategy = Strategy::kHybrid;
  Index rows = 0;
  Index cols = 0;
  std::uint64_t flops = 0;
  Offset nnz_upper = 0;   // nnz of the expanded intermediate, flops / 2
  Offset nnz_result = 0;
  StageTimes times;
  MemoryFootprint memory;
  /// Product-row storage actually allocated by the strategy that ran.
  std::uint64_t temp_bytes = 0;
  std::size_t realloc_count = 0;
  std::uint64_t realloc_bytes_copied = 0;
  std::vector<ReallocEvent> realloc_log;  // sorted by row
  std::vector<std::size_t> bin_counts;

  /// flops over the compute and arrange stages.
  double gflops() const;
  /// Every field except timings.
  bool same_result(const SpgemmReport& other) const;
};

struct SpgemmOptions {
  Strategy strategy = Strategy::kHybrid;
  BinConfig bins;
  RegrowMode regrow = RegrowMode::kFreshBlock;
  unsigned workers = 0;  // 0: hardware concurrency
  KernelOptions kernel;
};

template <class T>
struct SpgemmResult {
  CsrMatrix<T> c;
  SpgemmReport report;
};

/// Stage 1: one independent pass per row.
template <class T>
UpperBoundArray stage1_upper_bound(const CsrMatrix<T>& a, const CsrMatrix<T>& b,
                                   unsigned workers = 0);

/// Sequential counting pass that assigns every row to its bin.
BinSet bin_rows(const UpperBoundArray& u, const BinConfig& config = {});

/// Capacities of the hybrid scheme: u_i for groups 1-4, the fixed initial
/// capacity for group 5.
std::vector<Offset> hybrid_capacities(const UpperBoundArray& u, const BinConfig& config = {});

template <class T>
struct Binning {
  BinSet bins;
  TempMatrix<T> tmp;
};

/// Stage 2: bins plus a temporary matrix sized by the hybrid scheme.
template <class T>
Binning<T> stage2_binning(const UpperBoundArray& u, const BinConfig& config = {},
                          RegrowMode regrow = RegrowMode::kFreshBlock);

/// Stage 3: runs the kernel of each non-empty bin over its rows. Returns the
/// per-row nnz. When `trace` is given, records which kernel handled each row.
template <class T>
std::vector<Offset> stage3_compute(const CsrMatrix<T>& a, const CsrMatrix<T>& b, const BinSet& bins,
                                   TempMatrix<T>& tmp, const SpgemmOptions& options = {},
                                   std::vector<KernelKind>* trace = nullptr);

/// Stage 4: exact-size CSR assembled from the temporary matrix. Throws Error
/// if row_nnz disagrees with the temporary matrix.
template <class T>
CsrMatrix<T> stage4_arrange(const TempMatrix<T>& tmp, std::span<const Offset> row_nnz,
                            Index num_cols, unsigned workers = 0);

/// The four-stage product C = A * B.
template <class T>
SpgemmResult<T> spgemm(const CsrMatrix<T>& a, const CsrMatrix<T>& b,
                       const SpgemmOptions& options = {});

/// Final hybrid capacity of a row with upper bound u and final size nnz: u
/// for groups 1-4, otherwise the initial capacity doubled until nnz fits.
Offset hybrid_final_capacity(Offset u, Offset nnz, const BinConfig& config = {});

}  // namespace spgemm
