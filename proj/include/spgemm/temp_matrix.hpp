#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "spgemm/types.hpp"

namespace spgemm {

/// How a row that outgrows its slot gets more room.
enum class RegrowMode {
  kFreshBlock,  // allocate a new block and copy the live entries over
  kInPlace,     // extend the existing allocation, no copy traffic
};

struct ReallocEvent {
  Index row;
  Offset old_capacity;
  Offset new_capacity;

  friend bool operator==(const ReallocEvent&, const ReallocEvent&) = default;
};

/// The temporary product matrix: every row owns a slot of some capacity,
/// initially carved out of one contiguous arena. Rows whose slot is regrown
/// move into a private block. Distinct rows may be written concurrently.
template <class T>
class TempMatrix {
 public:
  struct Slot {
    std::span<Index> cols;
    std::span<T> values;
  };

  explicit TempMatrix(std::vector<Offset> capacities, RegrowMode mode = RegrowMode::kFreshBlock);

  TempMatrix(TempMatrix&&) noexcept;
  TempMatrix& operator=(TempMatrix&&) noexcept;
  ~TempMatrix();

  Index num_rows() const { return static_cast<Index>(capacity_.size()); }
  Offset capacity(Index row) const { return capacity_[row]; }
  Offset used(Index row) const { return used_[row]; }
  RegrowMode regrow_mode() const { return mode_; }

  /// Full-capacity view of a row's storage.
  Slot slot(Index row);

  std::span<const Index> cols(Index row) const;
  std::span<const T> values(Index row) const;

  /// Throws Error when n exceeds the row's capacity.
  void set_used(Index row, Offset n);

  /// Grows a row to new_capacity, preserving its first used(row) entries, and
  /// appends an event to the realloc log.
  Slot regrow(Index row, Offset new_capacity);

  std::vector<ReallocEvent> realloc_log() const;
  std::size_t realloc_count() const;

  /// Sum of current row capacities.
  Offset total_capacity() const { return total_capacity_.load(); }

  /// Footprint of the current layout: row offsets plus one index and one value
  /// per unit of capacity.
  std::size_t bytes_allocated() const {
    return (capacity_.size() + 1) * sizeof(Offset) +
           static_cast<std::size_t>(total_capacity()) * entry_bytes();
  }

  /// Bytes moved between blocks by kFreshBlock regrowth.
  std::size_t bytes_copied() const { return bytes_copied_.load(); }

  static constexpr std::size_t entry_bytes() { return sizeof(Index) + sizeof(T); }

 private:
  struct Block {
    std::vector<Index> cols;
    std::vector<T> values;
  };

  RegrowMode mode_;
  std::vector<Offset> capacity_;
  std::vector<Offset> used_;
  std::vector<Offset> arena_offset_;
  std::vector<Index> arena_cols_;
  std::vector<T> arena_values_;
  std::vector<std::unique_ptr<Block>> grown_;
  std::atomic<Offset> total_capacity_{0};
  std::atomic<std::size_t> bytes_copied_{0};

  mutable std::unique_ptr<std::mutex> log_mutex_;
  std::vector<ReallocEvent> log_;
};

}  // namespace spgemm
