#include "spgemm/temp_matrix.hpp"

#include <algorithm>
#include <new>
#include <string>

namespace spgemm {

template <class T>
TempMatrix<T>::TempMatrix(std::vector<Offset> capacities, RegrowMode mode)
    : mode_(mode),
      capacity_(std::move(capacities)),
      used_(capacity_.size(), 0),
      arena_offset_(capacity_.size() + 1, 0),
      grown_(capacity_.size()),
      log_mutex_(std::make_unique<std::mutex>()) {
  for (std::size_t i = 0; i < capacity_.size(); ++i) {
    arena_offset_[i + 1] = arena_offset_[i] + capacity_[i];
  }
  const Offset total = arena_offset_.back();
  try {
    arena_cols_.resize(total);
    arena_values_.resize(total);
  } catch (const std::bad_alloc&) {
    throw Error("temporary matrix: cannot allocate " + std::to_string(total) + " entries");
  }
  total_capacity_ = total;
}

template <class T>
TempMatrix<T>::TempMatrix(TempMatrix&& other) noexcept
    : mode_(other.mode_),
      capacity_(std::move(other.capacity_)),
      used_(std::move(other.used_)),
      arena_offset_(std::move(other.arena_offset_)),
      arena_cols_(std::move(other.arena_cols_)),
      arena_values_(std::move(other.arena_values_)),
      grown_(std::move(other.grown_)),
      total_capacity_(other.total_capacity_.load()),
      bytes_copied_(other.bytes_copied_.load()),
      log_mutex_(std::move(other.log_mutex_)),
      log_(std::move(other.log_)) {}

template <class T>
TempMatrix<T>& TempMatrix<T>::operator=(TempMatrix&& other) noexcept {
  mode_ = other.mode_;
  capacity_ = std::move(other.capacity_);
  used_ = std::move(other.used_);
  arena_offset_ = std::move(other.arena_offset_);
  arena_cols_ = std::move(other.arena_cols_);
  arena_values_ = std::move(other.arena_values_);
  grown_ = std::move(other.grown_);
  total_capacity_ = other.total_capacity_.load();
  bytes_copied_ = other.bytes_copied_.load();
  log_mutex_ = std::move(other.log_mutex_);
  log_ = std::move(other.log_);
  return *this;
}

template <class T>
TempMatrix<T>::~TempMatrix() = default;

template <class T>
typename TempMatrix<T>::Slot TempMatrix<T>::slot(Index row) {
  if (auto& block = grown_[row]) return {block->cols, block->values};
  const auto begin = arena_offset_[row];
  const auto len = capacity_[row];
  return {std::span<Index>(arena_cols_).subspan(begin, len),
          std::span<T>(arena_values_).subspan(begin, len)};
}

template <class T>
std::span<const Index> TempMatrix<T>::cols(Index row) const {
  if (const auto& block = grown_[row]) return std::span<const Index>(block->cols).first(used_[row]);
  return std::span<const Index>(arena_cols_).subspan(arena_offset_[row], used_[row]);
}

template <class T>
std::span<const T> TempMatrix<T>::values(Index row) const {
  if (const auto& block = grown_[row]) return std::span<const T>(block->values).first(used_[row]);
  return std::span<const T>(arena_values_).subspan(arena_offset_[row], used_[row]);
}

template <class T>
void TempMatrix<T>::set_used(Index row, Offset n) {
  if (n > capacity_[row]) {
    throw Error("row " + std::to_string(row) + " holds " + std::to_string(n) +
                " entries but its capacity is " + std::to_string(capacity_[row]));
  }
  used_[row] = n;
}

template <class T>
typename TempMatrix<T>::Slot TempMatrix<T>::regrow(Index row, Offset new_capacity) {
  const Offset old_capacity = capacity_[row];
  if (new_capacity <= old_capacity) {
    throw Error("row " + std::to_string(row) + ": regrow to " + std::to_string(new_capacity) +
                " does not exceed capacity " + std::to_string(old_capacity));
  }
  const Offset live = used_[row];
  auto& block = grown_[row];
  try {
    if (mode_ == RegrowMode::kInPlace && block) {
      block->cols.resize(new_capacity);
      block->values.resize(new_capacity);
    } else {
      auto fresh = std::make_unique<Block>();
      fresh->cols.resize(new_capacity);
      fresh->values.resize(new_capacity);
      const auto old = slot(row);
      std::copy_n(old.cols.begin(), live, fresh->cols.begin());
      std::copy_n(old.values.begin(), live, fresh->values.begin());
      if (mode_ == RegrowMode::kFreshBlock) bytes_copied_ += live * entry_bytes();
      block = std::move(fresh);
    }
  } catch (const std::bad_alloc&) {
    throw Error("row " + std::to_string(row) + ": cannot allocate capacity " +
                std::to_string(new_capacity));
  }
  capacity_[row] = new_capacity;
  total_capacity_ += new_capacity - old_capacity;
  {
    std::lock_guard lock(*log_mutex_);
    log_.push_back({row, old_capacity, new_capacity});
  }
  return slot(row);
}

template <class T>
std::vector<ReallocEvent> TempMatrix<T>::realloc_log() const {
  std::lock_guard lock(*log_mutex_);
  return log_;
}

template <class T>
std::size_t TempMatrix<T>::realloc_count() const {
  std::lock_guard lock(*log_mutex_);
  return log_.size();
}

template class TempMatrix<float>;
template class TempMatrix<double>;
template class TempMatrix<PatternValue>;

}  // namespace spgemm
