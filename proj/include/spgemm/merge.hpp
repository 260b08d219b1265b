#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "spgemm/types.hpp"

namespace spgemm::merge {

/// Number of elements taken from `a` among the first `diag` outputs of the
/// stable merge of a and b (a wins ties). Binary search along one diagonal of
/// the merge grid.
template <class Key>
std::size_t merge_path_search(std::span<const Key> a, std::span<const Key> b, std::size_t diag) {
  std::size_t lo = diag > b.size() ? diag - b.size() : 0;
  std::size_t hi = diag < a.size() ? diag : a.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (a[mid] <= b[diag - mid - 1]) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// Stable merge split into `lanes` segments of equal output length. For every
/// output position calls emit(out_pos, from_a, src_pos). Lanes are
/// independent; here they run one after another.
template <class Key, class Emit>
void merge_path_visit(std::span<const Key> a, std::span<const Key> b, unsigned lanes, Emit&& emit) {
  const std::size_t total = a.size() + b.size();
  if (lanes == 0) lanes = 1;
  for (unsigned lane = 0; lane < lanes; ++lane) {
    const std::size_t d0 = total * lane / lanes;
    const std::size_t d1 = total * (lane + 1) / lanes;
    std::size_t i = merge_path_search(a, b, d0);
    std::size_t j = d0 - i;
    for (std::size_t out = d0; out < d1; ++out) {
      if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
        emit(out, true, i++);
      } else {
        emit(out, false, j++);
      }
    }
  }
}

struct NoPayload {
  friend bool operator==(const NoPayload&, const NoPayload&) = default;
};

enum class Payload { kNone, kU32, kU64 };

std::string to_string(Payload p);
Payload parse_payload(const std::string& text);

/// Sorted 32-bit keys with an optional parallel payload array. With
/// NoPayload the values array stays empty.
template <class V>
struct KeyValueSeq {
  static constexpr bool kHasPayload = !std::is_same_v<V, NoPayload>;

  std::vector<std::uint32_t> keys;
  std::vector<V> values;

  std::size_t size() const { return keys.size(); }
  friend bool operator==(const KeyValueSeq&, const KeyValueSeq&) = default;
};

template <class V>
bool is_sorted(const KeyValueSeq<V>& s);

/// Reference two-pointer merge; a-entries precede equal b-entries.
template <class V>
KeyValueSeq<V> merge_serial(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b);

template <class V>
KeyValueSeq<V> merge_path(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b, unsigned lanes);

/// Out-of-place: each element lands at its own index plus its rank in the
/// other sequence.
template <class V>
KeyValueSeq<V> merge_ranking(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b);

/// Last stage of Batcher's odd-even merge sort. Requires |a| == |b| == 2^k;
/// throws Error otherwise. Ties are broken by source position, so the output
/// matches the stable serial merge exactly.
template <class V>
KeyValueSeq<V> merge_oddeven(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b);

/// b reversed and appended to a gives a bitonic sequence, which one bitonic
/// merge network sorts. Same size restriction as merge_oddeven.
template <class V>
KeyValueSeq<V> merge_bitonic(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b);

// The comparator networks on bare keys, exposed for zero-one checks. Both
// halves of `keys` must be sorted and the total length a power of two.
void oddeven_merge_network(std::span<std::uint32_t> keys);
void bitonic_merge_network(std::span<std::uint32_t> keys);

struct BenchRow {
  std::string algorithm;
  std::size_t l;
  Payload payload;
  double elements_per_second;
};

struct BenchConfig {
  std::vector<std::size_t> sizes;            // powers of two in [2^4, 2^12]
  Payload payload = Payload::kNone;
  unsigned trials = 3;
  std::size_t total_elements = std::size_t{1} << 22;  // per trial, constant over l
  std::vector<unsigned> lane_sweep = {1, 2, 4, 8, 16, 32};
  unsigned workers = 0;
  std::uint64_t seed = 1;
};

/// Times every merge variant on many independent pair-merges of length l.
/// Before timing, all variants must agree on every pair (throws Error if not).
std::vector<BenchRow> bench_merges(const BenchConfig& config);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace spgemm::merge
