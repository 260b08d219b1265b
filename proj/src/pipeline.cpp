#include "spgemm/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "spgemm/parallel.hpp"

namespace spgemm {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::uint64_t row_storage_bytes(Index rows, Offset entries, std::size_t entry_bytes) {
  return (static_cast<std::uint64_t>(rows) + 1) * sizeof(Offset) + entries * entry_bytes;
}

}  // namespace

std::size_t BinConfig::bin_of(Offset u) const {
  if (u <= group3_max) return static_cast<std::size_t>(u);
  for (std::size_t k = 0; k < group4_upper.size(); ++k) {
    if (u <= group4_upper[k]) return static_cast<std::size_t>(group3_max) + 1 + k;
  }
  return num_bins() - 1;
}

int BinConfig::group_of_bin(std::size_t bin) const {
  if (bin == 0) return 1;
  if (bin == 1) return 2;
  if (bin <= group3_max) return 3;
  if (bin + 1 < num_bins()) return 4;
  return 5;
}

void BinConfig::check() const {
  if (group3_max < 2) throw Error("bin config: group 3 must cover at least size 2");
  Offset prev = group3_max;
  for (Offset t : group4_upper) {
    if (t <= prev) throw Error("bin config: group 4 thresholds must increase");
    prev = t;
  }
  if (group5_initial_capacity == 0) throw Error("bin config: initial capacity must be positive");
}

Offset UpperBoundArray::total() const { return std::accumulate(u.begin(), u.end(), Offset{0}); }

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kHybrid: return "hybrid";
    case Strategy::kUpperBound: return "upper";
    case Strategy::kPrecise: return "precise";
  }
  return "?";
}

Strategy parse_strategy(const std::string& text) {
  if (text == "hybrid") return Strategy::kHybrid;
  if (text == "upper" || text == "upper_bound") return Strategy::kUpperBound;
  if (text == "precise") return Strategy::kPrecise;
  throw Error("unknown strategy '" + text + "'");
}

std::uint64_t MemoryFootprint::of(Strategy s) const {
  switch (s) {
    case Strategy::kHybrid: return hybrid;
    case Strategy::kUpperBound: return upper_bound;
    case Strategy::kPrecise: return precise;
  }
  return 0;
}

double SpgemmReport::gflops() const {
  const double ms = times.compute_ms + times.arrange_ms;
  return ms > 0 ? static_cast<double>(flops) / (ms * 1e6) : 0.0;
}

bool SpgemmReport::same_result(const SpgemmReport& o) const {
  return strategy == o.strategy && rows == o.rows && cols == o.cols && flops == o.flops &&
         nnz_upper == o.nnz_upper && nnz_result == o.nnz_result && memory == o.memory &&
         temp_bytes == o.temp_bytes && realloc_count == o.realloc_count &&
         realloc_bytes_copied == o.realloc_bytes_copied && realloc_log == o.realloc_log &&
         bin_counts == o.bin_counts;
}

template <class T>
UpperBoundArray stage1_upper_bound(const CsrMatrix<T>& a, const CsrMatrix<T>& b, unsigned workers) {
  if (a.num_cols() != b.num_rows()) {
    throw DimensionMismatch("stage1_upper_bound: inner dimensions differ (" +
                            std::to_string(a.num_cols()) + " vs " + std::to_string(b.num_rows()) +
                            ")");
  }
  UpperBoundArray out;
  out.u.resize(a.num_rows());
  parallel_for(
      a.num_rows(), workers,
      [&](std::size_t i) { out.u[i] = row_upper_bound(static_cast<Index>(i), a, b); }, 4096);
  return out;
}

BinSet bin_rows(const UpperBoundArray& u, const BinConfig& config) {
  config.check();
  const std::size_t nb = config.num_bins();
  BinSet set;
  set.group_of_bin.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) set.group_of_bin[b] = config.group_of_bin(b);

  std::vector<std::size_t> count(nb, 0);
  for (Offset ui : u.u) ++count[config.bin_of(ui)];
  set.offsets.assign(nb + 1, 0);
  for (std::size_t b = 0; b < nb; ++b) set.offsets[b + 1] = set.offsets[b] + count[b];
  set.rows.resize(u.u.size());
  std::vector<std::size_t> cursor(set.offsets.begin(), set.offsets.end() - 1);
  for (std::size_t i = 0; i < u.u.size(); ++i) {
    set.rows[cursor[config.bin_of(u.u[i])]++] = static_cast<Index>(i);
  }
  return set;
}

std::vector<Offset> hybrid_capacities(const UpperBoundArray& u, const BinConfig& config) {
  std::vector<Offset> cap(u.u.size());
  for (std::size_t i = 0; i < cap.size(); ++i) {
    cap[i] = config.group_of(u.u[i]) == 5 ? config.group5_initial_capacity : u.u[i];
  }
  return cap;
}

Offset hybrid_final_capacity(Offset u, Offset nnz, const BinConfig& config) {
  if (config.group_of(u) != 5) return u;
  Offset cap = config.group5_initial_capacity;
  while (cap < nnz) cap *= 2;
  return cap;
}

template <class T>
Binning<T> stage2_binning(const UpperBoundArray& u, const BinConfig& config, RegrowMode regrow) {
  auto bins = bin_rows(u, config);
  return {std::move(bins), TempMatrix<T>(hybrid_capacities(u, config), regrow)};
}

template <class T>
std::vector<Offset> stage3_compute(const CsrMatrix<T>& a, const CsrMatrix<T>& b, const BinSet& bins,
                                   TempMatrix<T>& tmp, const SpgemmOptions& options,
                                   std::vector<KernelKind>* trace) {
  std::vector<Offset> row_nnz(a.num_rows(), 0);
  if (trace) trace->assign(a.num_rows(), KernelKind::kNone);
  for (std::size_t bin = 0; bin < bins.num_bins(); ++bin) {
    const auto rows = bins.bin(bin);
    if (rows.empty()) continue;  // no launch for empty bins
    const int group = bins.group_of_bin[bin];
    KernelKind kind = KernelKind::kTrivial;
    if (group == 3) kind = KernelKind::kHeap;
    else if (group == 4) kind = KernelKind::kBitonicEsc;
    else if (group == 5) kind = KernelKind::kMergeInsert;

    const std::size_t grain = group <= 2 ? 4096 : group == 3 ? 256 : group == 4 ? 16 : 1;
    parallel_for(
        rows.size(), options.workers,
        [&](std::size_t k) {
          const Index row = rows[k];
          Offset n = 0;
          switch (kind) {
            case KernelKind::kTrivial: n = kernel_trivial(row, a, b, tmp); break;
            case KernelKind::kHeap: n = kernel_heap(row, a, b, tmp, options.kernel); break;
            case KernelKind::kBitonicEsc: n = kernel_bitonic_esc(row, a, b, tmp, options.kernel); break;
            case KernelKind::kMergeInsert: n = kernel_merge_insert(row, a, b, tmp, options.kernel); break;
            case KernelKind::kNone: break;
          }
          row_nnz[row] = n;
          if (trace) (*trace)[row] = kind;
        },
        grain);
  }
  return row_nnz;
}

template <class T>
CsrMatrix<T> stage4_arrange(const TempMatrix<T>& tmp, std::span<const Offset> row_nnz,
                            Index num_cols, unsigned workers) {
  const Index m = tmp.num_rows();
  if (row_nnz.size() != m) throw Error("stage4_arrange: row count mismatch");
  std::vector<Offset> row_ptr(static_cast<std::size_t>(m) + 1, 0);
  for (Index i = 0; i < m; ++i) {
    if (row_nnz[i] != tmp.used(i)) {
      throw Error("stage4_arrange: row " + std::to_string(i) + " reports " +
                  std::to_string(row_nnz[i]) + " entries but holds " +
                  std::to_string(tmp.used(i)));
    }
    row_ptr[i + 1] = row_ptr[i] + row_nnz[i];
  }
  std::vector<Index> cols(row_ptr.back());
  std::vector<T> vals(row_ptr.back());
  parallel_for(
      m, workers,
      [&](std::size_t i) {
        if (row_nnz[i] == 0) return;  // nothing to copy for empty rows
        const auto src_c = tmp.cols(static_cast<Index>(i));
        const auto src_v = tmp.values(static_cast<Index>(i));
        std::copy(src_c.begin(), src_c.end(), cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]));
        std::copy(src_v.begin(), src_v.end(), vals.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]));
      },
      1024);
  return CsrMatrix<T>(m, num_cols, std::move(row_ptr), std::move(cols), std::move(vals));
}

template <class T>
SpgemmResult<T> spgemm(const CsrMatrix<T>& a, const CsrMatrix<T>& b, const SpgemmOptions& options) {
  if (a.num_cols() != b.num_rows()) {
    throw DimensionMismatch("spgemm: cannot multiply " + std::to_string(a.num_rows()) + "x" +
                            std::to_string(a.num_cols()) + " by " + std::to_string(b.num_rows()) +
                            "x" + std::to_string(b.num_cols()));
  }
  SpgemmReport report;
  report.strategy = options.strategy;
  report.rows = a.num_rows();
  report.cols = b.num_cols();

  auto t = Clock::now();
  const auto u = stage1_upper_bound(a, b, options.workers);
  report.times.upper_bound_ms = elapsed_ms(t);

  t = Clock::now();
  auto bins = bin_rows(u, options.bins);
  std::vector<Offset> capacities;
  switch (options.strategy) {
    case Strategy::kHybrid: capacities = hybrid_capacities(u, options.bins); break;
    case Strategy::kUpperBound: capacities = u.u; break;
    case Strategy::kPrecise: break;
  }
  report.times.binning_ms = elapsed_ms(t);

  if (options.strategy == Strategy::kPrecise) {
    // symbolic pass through the same pipeline, values suppressed
    t = Clock::now();
    SpgemmOptions symbolic = options;
    symbolic.strategy = Strategy::kHybrid;
    symbolic.kernel.fault = FaultInjection::kNone;
    const auto pattern = spgemm(pattern_of(a), pattern_of(b), symbolic);
    capacities.resize(a.num_rows());
    for (Index i = 0; i < a.num_rows(); ++i) capacities[i] = pattern.c.row_nnz(i);
    report.times.precise_prepass_ms = elapsed_ms(t);
  }

  t = Clock::now();
  TempMatrix<T> tmp(std::move(capacities), options.regrow);
  report.times.binning_ms += elapsed_ms(t);

  t = Clock::now();
  const auto row_nnz = stage3_compute(a, b, bins, tmp, options);
  report.times.compute_ms = elapsed_ms(t);

  t = Clock::now();
  auto c = stage4_arrange(tmp, row_nnz, b.num_cols(), options.workers);
  report.times.arrange_ms = elapsed_ms(t);

  report.nnz_upper = u.total();
  report.flops = 2 * report.nnz_upper;
  report.nnz_result = c.nnz();
  for (std::size_t bin = 0; bin < bins.num_bins(); ++bin) report.bin_counts.push_back(bins.count(bin));

  const std::size_t entry = TempMatrix<T>::entry_bytes();
  Offset hybrid_entries = 0;
  for (Index i = 0; i < a.num_rows(); ++i) {
    hybrid_entries += hybrid_final_capacity(u.u[i], row_nnz[i], options.bins);
  }
  auto& mem = report.memory;
  mem.inputs = a.storage_bytes() + b.storage_bytes();
  mem.precise = mem.inputs + row_storage_bytes(a.num_rows(), c.nnz(), entry);
  mem.upper_bound = mem.inputs + row_storage_bytes(a.num_rows(), report.nnz_upper, entry);
  mem.hybrid = mem.inputs + row_storage_bytes(a.num_rows(), hybrid_entries, entry);
  report.temp_bytes = tmp.bytes_allocated();

  report.realloc_log = tmp.realloc_log();
  std::sort(report.realloc_log.begin(), report.realloc_log.end(),
            [](const ReallocEvent& x, const ReallocEvent& y) {
              return x.row != y.row ? x.row < y.row : x.new_capacity < y.new_capacity;
            });
  report.realloc_count = report.realloc_log.size();
  report.realloc_bytes_copied = tmp.bytes_copied();
  return {std::move(c), std::move(report)};
}

#define SPGEMM_INSTANTIATE_PIPELINE(T)                                                          \
  template UpperBoundArray stage1_upper_bound(const CsrMatrix<T>&, const CsrMatrix<T>&, unsigned); \
  template Binning<T> stage2_binning(const UpperBoundArray&, const BinConfig&, RegrowMode);       \
  template std::vector<Offset> stage3_compute(const CsrMatrix<T>&, const CsrMatrix<T>&,          \
                                              const BinSet&, TempMatrix<T>&,                     \
                                              const SpgemmOptions&, std::vector<KernelKind>*);   \
  template CsrMatrix<T> stage4_arrange(const TempMatrix<T>&, std::span<const Offset>, Index,      \
                                       unsigned);                                                \
  template SpgemmResult<T> spgemm(const CsrMatrix<T>&, const CsrMatrix<T>&, const SpgemmOptions&);

SPGEMM_INSTANTIATE_PIPELINE(float)
SPGEMM_INSTANTIATE_PIPELINE(double)
SPGEMM_INSTANTIATE_PIPELINE(PatternValue)

}  // namespace spgemm
