#include "spgemm/kernels.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "spgemm/merge.hpp"

namespace spgemm {

const char* to_string(KernelKind k) {
  switch (k) {
    case KernelKind::kNone: return "none";
    case KernelKind::kTrivial: return "trivial";
    case KernelKind::kHeap: return "heap";
    case KernelKind::kBitonicEsc: return "bitonic_esc";
    case KernelKind::kMergeInsert: return "merge_insert";
  }
  return "?";
}

template <class T>
void expand_row(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b, std::vector<Index>& cols,
                std::vector<T>& values) {
  cols.clear();
  values.clear();
  const auto ai = a.row(row);
  for (std::size_t p = 0; p < ai.size(); ++p) {
    const auto bj = b.row(ai.cols[p]);
    for (std::size_t q = 0; q < bj.size(); ++q) {
      cols.push_back(bj.cols[q]);
      values.push_back(ai.values[p] * bj.values[q]);
    }
  }
}

// ---------------------------------------------------------------------------
// heap method

template <class T>
void HeapWorkspace<T>::reset(std::size_t capacity) {
  cols_.assign(capacity, 0);
  values_.assign(capacity, T{});
  seq_.assign(capacity, 0);
  heap_size_ = 0;
  result_begin_ = capacity;
  next_seq_ = 0;
}

template <class T>
bool HeapWorkspace<T>::before(std::size_t x, std::size_t y) const {
  return cols_[x] != cols_[y] ? cols_[x] > cols_[y] : seq_[x] < seq_[y];
}

template <class T>
void HeapWorkspace<T>::swap_entries(std::size_t x, std::size_t y) {
  std::swap(cols_[x], cols_[y]);
  std::swap(values_[x], values_[y]);
  std::swap(seq_[x], seq_[y]);
}

template <class T>
void HeapWorkspace<T>::sift_up(std::size_t pos) {
  while (pos > 0) {
    const std::size_t parent = (pos - 1) / 2;
    if (!before(pos, parent)) break;
    swap_entries(pos, parent);
    pos = parent;
  }
}

template <class T>
void HeapWorkspace<T>::sift_down(std::size_t pos) {
  for (;;) {
    const std::size_t l = 2 * pos + 1;
    if (l >= heap_size_) break;
    std::size_t best = l;
    if (l + 1 < heap_size_ && before(l + 1, l)) best = l + 1;
    if (!before(best, pos)) break;
    swap_entries(pos, best);
    pos = best;
  }
}

template <class T>
void HeapWorkspace<T>::push(Index col, T value) {
  if (heap_size_ >= result_begin_) throw std::logic_error("heap workspace overflow");
  cols_[heap_size_] = col;
  values_[heap_size_] = value;
  seq_[heap_size_] = next_seq_++;
  sift_up(heap_size_++);
}

template <class T>
bool HeapWorkspace<T>::step(bool faulty_fusion) {
  if (heap_size_ == 0) return false;
  const Index col = cols_[0];
  const T value = values_[0];
  --heap_size_;
  if (heap_size_ > 0) {
    cols_[0] = cols_[heap_size_];
    values_[0] = values_[heap_size_];
    seq_[0] = seq_[heap_size_];
    sift_down(0);
  }
  if (result_begin_ < cols_.size() && cols_[result_begin_] == col) {
    if (faulty_fusion) values_[result_begin_] = value;
    else values_[result_begin_] += value;
  } else {
    --result_begin_;
    cols_[result_begin_] = col;
    values_[result_begin_] = value;
  }
  return true;
}

template <class T>
bool HeapWorkspace<T>::result_region_valid() const {
  if (heap_size_ > result_begin_) return false;
  for (std::size_t p = result_begin_ + 1; p < cols_.size(); ++p) {
    if (cols_[p - 1] >= cols_[p]) return false;
  }
  return true;
}

template <class T>
Offset kernel_trivial(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b, TempMatrix<T>& tmp) {
  const auto ai = a.row(row);
  for (std::size_t p = 0; p < ai.size(); ++p) {
    const auto bj = b.row(ai.cols[p]);
    if (bj.empty()) continue;
    if (bj.size() != 1) throw std::logic_error("kernel_trivial: row has more than one product");
    auto slot = tmp.slot(row);
    slot.cols[0] = bj.cols[0];
    slot.values[0] = ai.values[p] * bj.values[0];
    tmp.set_used(row, 1);
    return 1;
  }
  tmp.set_used(row, 0);
  return 0;
}

template <class T>
Offset kernel_heap(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b, TempMatrix<T>& tmp,
                   const KernelOptions& options) {
  thread_local HeapWorkspace<T> ws;
  ws.reset(row_upper_bound(row, a, b));
  const auto ai = a.row(row);
  for (std::size_t p = 0; p < ai.size(); ++p) {
    const auto bj = b.row(ai.cols[p]);
    for (std::size_t q = 0; q < bj.size(); ++q) ws.push(bj.cols[q], ai.values[p] * bj.values[q]);
  }
  const bool faulty = options.fault == FaultInjection::kHeapFusion;
  while (ws.step(faulty)) {
  }
  const auto cols = ws.result_cols();
  const auto vals = ws.result_values();
  auto slot = tmp.slot(row);
  std::copy(cols.begin(), cols.end(), slot.cols.begin());
  std::copy(vals.begin(), vals.end(), slot.values.begin());
  tmp.set_used(row, cols.size());
  return cols.size();
}

// ---------------------------------------------------------------------------
// bitonic ESC

template <class T>
void bitonic_sort_pairs(std::span<std::uint64_t> keys, std::span<T> values) {
  const std::size_t n = keys.size();
  if (n != values.size() || (n > 0 && !std::has_single_bit(n))) {
    throw std::invalid_argument("bitonic_sort_pairs: length must be a power of two");
  }
  for (std::size_t k = 2; k <= n; k <<= 1) {
    for (std::size_t j = k >> 1; j > 0; j >>= 1) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = i ^ j;
        if (l <= i) continue;
        const bool ascending = (i & k) == 0;
        if (ascending ? keys[i] > keys[l] : keys[i] < keys[l]) {
          std::swap(keys[i], keys[l]);
          std::swap(values[i], values[l]);
        }
      }
    }
  }
}

template <class T>
Offset kernel_bitonic_esc(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b,
                          TempMatrix<T>& tmp, const KernelOptions& options) {
  constexpr std::uint64_t kPad = ~std::uint64_t{0};
  thread_local EscWorkspace<T> ws;

  // expansion
  ws.keys.clear();
  ws.values.clear();
  const auto ai = a.row(row);
  std::uint64_t seq = 0;
  for (std::size_t p = 0; p < ai.size(); ++p) {
    const auto bj = b.row(ai.cols[p]);
    for (std::size_t q = 0; q < bj.size(); ++q) {
      ws.keys.push_back((std::uint64_t{bj.cols[q]} << 32) | seq++);
      ws.values.push_back(ai.values[p] * bj.values[q]);
    }
  }
  const std::size_t n = std::bit_ceil(std::max<std::size_t>(ws.keys.size(), 1));
  ws.keys.resize(n, kPad);
  ws.values.resize(n, T{});

  // sorting
  bitonic_sort_pairs(std::span<std::uint64_t>(ws.keys), std::span<T>(ws.values));

  // compression: segment heads, scan, segmented reduction
  ws.head_flags.resize(n);
  ws.positions.resize(n);
  Offset running = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const bool live = ws.keys[p] != kPad;
    const bool head = live && (p == 0 || (ws.keys[p] >> 32) != (ws.keys[p - 1] >> 32));
    ws.head_flags[p] = head;
    running += head;
    ws.positions[p] = running;
  }
  const bool faulty = options.fault == FaultInjection::kEscFusion;
  auto slot = tmp.slot(row);
  if (running > slot.cols.size()) {
    throw Error("row " + std::to_string(row) + " needs " + std::to_string(running) +
                " entries but its capacity is " + std::to_string(slot.cols.size()));
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (ws.keys[p] == kPad) break;  // padding sorts last
    const auto out = ws.positions[p] - 1;
    if (ws.head_flags[p]) {
      slot.cols[out] = static_cast<Index>(ws.keys[p] >> 32);
      slot.values[out] = ws.values[p];
    } else if (faulty) {
      slot.values[out] = ws.values[p];
    } else {
      slot.values[out] += ws.values[p];
    }
  }
  tmp.set_used(row, running);
  return running;
}

// ---------------------------------------------------------------------------
// merge method

template <class T>
Offset kernel_merge_insert(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b,
                           TempMatrix<T>& tmp, const KernelOptions& options) {
  thread_local MergeWorkspace<T> ws;
  const Offset upper = row_upper_bound(row, a, b);
  Offset capacity = tmp.capacity(row);
  const Offset hard_cap = options.merge_hard_cap != 0
                              ? options.merge_hard_cap
                              : std::max(std::bit_ceil(std::max<Offset>(upper, 1)), capacity);
  const bool faulty = options.fault == FaultInjection::kMergeFusion;

  ws.result_cols.resize(capacity);
  ws.result_values.resize(capacity);
  ws.used = 0;
  ws.checkpoint = 0;

  const auto ai = a.row(row);
  while (ws.checkpoint < ai.size()) {
    const auto bj = b.row(ai.cols[ws.checkpoint]);
    const T scale = ai.values[ws.checkpoint];
    const std::size_t m = bj.size();

    ws.staged_cols.assign(bj.cols.begin(), bj.cols.end());
    ws.staged_values.resize(m);
    for (std::size_t q = 0; q < m; ++q) ws.staged_values[q] = scale * bj.values[q];

    // (1) binary search each staged column in the current result
    ws.duplicate_mask.resize(m);
    ws.hit_position.resize(m);
    const auto result_begin = ws.result_cols.begin();
    const auto result_end = result_begin + static_cast<std::ptrdiff_t>(ws.used);
    for (std::size_t q = 0; q < m; ++q) {
      const auto it = std::lower_bound(result_begin, result_end, ws.staged_cols[q]);
      ws.duplicate_mask[q] = it != result_end && *it == ws.staged_cols[q];
      ws.hit_position[q] = static_cast<Offset>(it - result_begin);
    }
    // (2) exclusive scan over survivors
    ws.placement.resize(m);
    Offset fresh = 0;
    for (std::size_t q = 0; q < m; ++q) {
      ws.placement[q] = fresh;
      fresh += ws.duplicate_mask[q] ? 0 : 1;
    }

    if (ws.used + fresh > capacity) {
      // overflow: dump, regrow 2x until the merge fits, reload, resume here
      auto slot = tmp.slot(row);
      std::copy_n(ws.result_cols.begin(), ws.used, slot.cols.begin());
      std::copy_n(ws.result_values.begin(), ws.used, slot.values.begin());
      tmp.set_used(row, ws.used);
      while (ws.used + fresh > capacity) {
        const Offset next = std::max<Offset>(1, capacity * 2);
        if (next > hard_cap) {
          throw std::logic_error("kernel_merge_insert: row " + std::to_string(row) +
                                 " would grow to " + std::to_string(next) +
                                 " beyond hard cap " + std::to_string(hard_cap));
        }
        slot = tmp.regrow(row, next);
        capacity = next;
      }
      ws.result_cols.resize(capacity);
      ws.result_values.resize(capacity);
      std::copy_n(slot.cols.begin(), ws.used, ws.result_cols.begin());
      std::copy_n(slot.values.begin(), ws.used, ws.result_values.begin());
      continue;
    }

    // fuse hits, then (3) append survivors behind the result
    for (std::size_t q = 0; q < m; ++q) {
      if (ws.duplicate_mask[q]) {
        auto& target = ws.result_values[ws.hit_position[q]];
        target = faulty ? ws.staged_values[q] : target + ws.staged_values[q];
      } else {
        ws.result_cols[ws.used + ws.placement[q]] = ws.staged_cols[q];
        ws.result_values[ws.used + ws.placement[q]] = ws.staged_values[q];
      }
    }

    // (4) merge [0, used) with [used, used + fresh) in the same buffer
    if (fresh > 0 && ws.used > 0) {
      const std::size_t total = ws.used + fresh;
      ws.merge_cols.resize(total);
      ws.merge_values.resize(total);
      const std::span<const Index> left(ws.result_cols.data(), ws.used);
      const std::span<const Index> right(ws.result_cols.data() + ws.used, fresh);
      auto emit = [&](std::size_t out, bool from_left, std::size_t src) {
        const std::size_t at = from_left ? src : ws.used + src;
        ws.merge_cols[out] = ws.result_cols[at];
        ws.merge_values[out] = ws.result_values[at];
      };
      if (options.serial_merge) {
        std::size_t i = 0, j = 0;
        for (std::size_t out = 0; out < total; ++out) {
          if (j >= right.size() || (i < left.size() && left[i] < right[j])) emit(out, true, i++);
          else emit(out, false, j++);
        }
      } else {
        merge::merge_path_visit<Index>(left, right, options.merge_lanes, emit);
      }
      std::copy(ws.merge_cols.begin(), ws.merge_cols.end(), ws.result_cols.begin());
      std::copy(ws.merge_values.begin(), ws.merge_values.end(), ws.result_values.begin());
    }
    ws.used += fresh;
    ++ws.checkpoint;
  }

  auto slot = tmp.slot(row);
  std::copy_n(ws.result_cols.begin(), ws.used, slot.cols.begin());
  std::copy_n(ws.result_values.begin(), ws.used, slot.values.begin());
  tmp.set_used(row, ws.used);
  return ws.used;
}

#define SPGEMM_INSTANTIATE_KERNELS(T)                                                          \
  template void expand_row(Index, const CsrMatrix<T>&, const CsrMatrix<T>&, std::vector<Index>&, \
                           std::vector<T>&);                                                   \
  template class HeapWorkspace<T>;                                                             \
  template void bitonic_sort_pairs(std::span<std::uint64_t>, std::span<T>);                    \
  template Offset kernel_trivial(Index, const CsrMatrix<T>&, const CsrMatrix<T>&, TempMatrix<T>&); \
  template Offset kernel_heap(Index, const CsrMatrix<T>&, const CsrMatrix<T>&, TempMatrix<T>&,  \
                              const KernelOptions&);                                           \
  template Offset kernel_bitonic_esc(Index, const CsrMatrix<T>&, const CsrMatrix<T>&,           \
                                     TempMatrix<T>&, const KernelOptions&);                    \
  template Offset kernel_merge_insert(Index, const CsrMatrix<T>&, const CsrMatrix<T>&,          \
                                      TempMatrix<T>&, const KernelOptions&);

SPGEMM_INSTANTIATE_KERNELS(float)
SPGEMM_INSTANTIATE_KERNELS(double)
SPGEMM_INSTANTIATE_KERNELS(PatternValue)

}  // namespace spgemm
