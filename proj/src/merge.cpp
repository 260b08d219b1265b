#include "spgemm/merge.hpp"

#include <algorithm>
#include <bit>

namespace spgemm::merge {
namespace {

struct Tagged {
  std::uint32_t key;
  std::uint32_t tag;

  bool operator<(const Tagged& o) const { return key != o.key ? key < o.key : tag < o.tag; }
};

template <class Item>
void compare_exchange(std::span<Item> v, std::size_t i, std::size_t j) {
  if (v[j] < v[i]) std::swap(v[i], v[j]);
}

template <class Item>
void oddeven_last_stage(std::span<Item> v) {
  const std::size_t n = v.size();
  const std::size_t p = n / 2;
  for (std::size_t k = p; k >= 1; k /= 2) {
    for (std::size_t j = k % p; j + k < n; j += 2 * k) {
      for (std::size_t i = 0; i < k && i + j + k < n; ++i) {
        if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) compare_exchange(v, i + j, i + j + k);
      }
    }
  }
}

template <class Item>
void bitonic_half_cleaners(std::span<Item> v) {
  const std::size_t n = v.size();
  for (std::size_t k = n / 2; k >= 1; k /= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((i & k) == 0) compare_exchange(v, i, i + k);
    }
  }
}

template <class V>
void check_network_sizes(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b, const char* who) {
  if (a.size() != b.size() || a.size() == 0 || !std::has_single_bit(a.size())) {
    throw Error(std::string(who) + ": inputs must have equal power-of-two lengths (got " +
                std::to_string(a.size()) + " and " + std::to_string(b.size()) + ")");
  }
}

template <class V>
KeyValueSeq<V> gather(const std::vector<Tagged>& order, const KeyValueSeq<V>& a,
                      const KeyValueSeq<V>& b) {
  KeyValueSeq<V> out;
  out.keys.reserve(order.size());
  if constexpr (KeyValueSeq<V>::kHasPayload) out.values.reserve(order.size());
  for (const auto& t : order) {
    out.keys.push_back(t.key);
    if constexpr (KeyValueSeq<V>::kHasPayload) {
      out.values.push_back(t.tag < a.size() ? a.values[t.tag] : b.values[t.tag - a.size()]);
    }
  }
  return out;
}

}  // namespace

std::string to_string(Payload p) {
  switch (p) {
    case Payload::kNone: return "key32";
    case Payload::kU32: return "key32_val32";
    case Payload::kU64: return "key32_val64";
  }
  return "?";
}

Payload parse_payload(const std::string& text) {
  if (text == "none" || text == "key32") return Payload::kNone;
  if (text == "u32" || text == "key32_val32") return Payload::kU32;
  if (text == "u64" || text == "key32_val64") return Payload::kU64;
  throw Error("unknown payload '" + text + "' (expected none, u32 or u64)");
}

template <class V>
bool is_sorted(const KeyValueSeq<V>& s) {
  return std::is_sorted(s.keys.begin(), s.keys.end());
}

template <class V>
KeyValueSeq<V> merge_serial(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b) {
  KeyValueSeq<V> out;
  out.keys.reserve(a.size() + b.size());
  if constexpr (KeyValueSeq<V>::kHasPayload) out.values.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  auto take = [&out](const KeyValueSeq<V>& s, std::size_t& k) {
    out.keys.push_back(s.keys[k]);
    if constexpr (KeyValueSeq<V>::kHasPayload) out.values.push_back(s.values[k]);
    ++k;
  };
  while (i < a.size() && j < b.size()) {
    if (a.keys[i] <= b.keys[j]) take(a, i);
    else take(b, j);
  }
  while (i < a.size()) take(a, i);
  while (j < b.size()) take(b, j);
  return out;
}

template <class V>
KeyValueSeq<V> merge_path(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b, unsigned lanes) {
  KeyValueSeq<V> out;
  out.keys.resize(a.size() + b.size());
  if constexpr (KeyValueSeq<V>::kHasPayload) out.values.resize(a.size() + b.size());
  merge_path_visit<std::uint32_t>(a.keys, b.keys, lanes,
                                  [&](std::size_t pos, bool from_a, std::size_t src) {
                                    const auto& s = from_a ? a : b;
                                    out.keys[pos] = s.keys[src];
                                    if constexpr (KeyValueSeq<V>::kHasPayload) {
                                      out.values[pos] = s.values[src];
                                    }
                                  });
  return out;
}

template <class V>
KeyValueSeq<V> merge_ranking(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b) {
  KeyValueSeq<V> out;
  out.keys.resize(a.size() + b.size());
  if constexpr (KeyValueSeq<V>::kHasPayload) out.values.resize(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    // ties: a goes first, so count only strictly smaller b keys
    const auto rank = static_cast<std::size_t>(
        std::lower_bound(b.keys.begin(), b.keys.end(), a.keys[i]) - b.keys.begin());
    out.keys[i + rank] = a.keys[i];
    if constexpr (KeyValueSeq<V>::kHasPayload) out.values[i + rank] = a.values[i];
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    const auto rank = static_cast<std::size_t>(
        std::upper_bound(a.keys.begin(), a.keys.end(), b.keys[j]) - a.keys.begin());
    out.keys[j + rank] = b.keys[j];
    if constexpr (KeyValueSeq<V>::kHasPayload) out.values[j + rank] = b.values[j];
  }
  return out;
}

template <class V>
KeyValueSeq<V> merge_oddeven(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b) {
  check_network_sizes(a, b, "merge_oddeven");
  std::vector<Tagged> work;
  work.reserve(a.size() * 2);
  for (std::size_t i = 0; i < a.size(); ++i) work.push_back({a.keys[i], static_cast<std::uint32_t>(i)});
  for (std::size_t j = 0; j < b.size(); ++j) {
    work.push_back({b.keys[j], static_cast<std::uint32_t>(a.size() + j)});
  }
  oddeven_last_stage(std::span<Tagged>(work));
  return gather(work, a, b);
}

template <class V>
KeyValueSeq<V> merge_bitonic(const KeyValueSeq<V>& a, const KeyValueSeq<V>& b) {
  check_network_sizes(a, b, "merge_bitonic");
  std::vector<Tagged> work;
  work.reserve(a.size() * 2);
  for (std::size_t i = 0; i < a.size(); ++i) work.push_back({a.keys[i], static_cast<std::uint32_t>(i)});
  for (std::size_t j = b.size(); j-- > 0;) {
    work.push_back({b.keys[j], static_cast<std::uint32_t>(a.size() + j)});
  }
  bitonic_half_cleaners(std::span<Tagged>(work));
  return gather(work, a, b);
}

void oddeven_merge_network(std::span<std::uint32_t> keys) {
  if (keys.size() < 2 || !std::has_single_bit(keys.size())) {
    throw Error("oddeven_merge_network: length must be a power of two >= 2");
  }
  oddeven_last_stage(keys);
}

void bitonic_merge_network(std::span<std::uint32_t> keys) {
  if (keys.size() < 2 || !std::has_single_bit(keys.size())) {
    throw Error("bitonic_merge_network: length must be a power of two >= 2");
  }
  std::reverse(keys.begin() + static_cast<std::ptrdiff_t>(keys.size() / 2), keys.end());
  bitonic_half_cleaners(keys);
}

#define SPGEMM_INSTANTIATE_MERGE(V)                                                        \
  template bool is_sorted(const KeyValueSeq<V>&);                                          \
  template KeyValueSeq<V> merge_serial(const KeyValueSeq<V>&, const KeyValueSeq<V>&);      \
  template KeyValueSeq<V> merge_path(const KeyValueSeq<V>&, const KeyValueSeq<V>&, unsigned); \
  template KeyValueSeq<V> merge_ranking(const KeyValueSeq<V>&, const KeyValueSeq<V>&);     \
  template KeyValueSeq<V> merge_oddeven(const KeyValueSeq<V>&, const KeyValueSeq<V>&);     \
  template KeyValueSeq<V> merge_bitonic(const KeyValueSeq<V>&, const KeyValueSeq<V>&);

SPGEMM_INSTANTIATE_MERGE(NoPayload)
SPGEMM_INSTANTIATE_MERGE(std::uint32_t)
SPGEMM_INSTANTIATE_MERGE(std::uint64_t)

}  // namespace spgemm::merge
