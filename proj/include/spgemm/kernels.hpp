#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spgemm/csr.hpp"
#include "spgemm/temp_matrix.hpp"

namespace spgemm {

enum class KernelKind : std::uint8_t { kNone, kTrivial, kHeap, kBitonicEsc, kMergeInsert };

const char* to_string(KernelKind k);

/// Deliberate kernel defects used by mutation tests of the verification path.
enum class FaultInjection : std::uint8_t { kNone, kHeapFusion, kEscFusion, kMergeFusion };

struct KernelOptions {
  /// Logical lanes of the merge-path merge inside kernel_merge_insert.
  unsigned merge_lanes = 4;
  /// Use the serial two-pointer merge instead of merge path (debug fallback).
  bool serial_merge = false;
  /// Upper limit for merge-insert regrowth; 0 means u_row rounded up to a
  /// power of two (never below the row's starting capacity).
  Offset merge_hard_cap = 0;
  FaultInjection fault = FaultInjection::kNone;
};

/// u_i for one row: sum of nnz(b_j*) over the nonzeros a_ij.
template <class T>
Offset row_upper_bound(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b) {
  Offset u = 0;
  for (Index j : a.row(row).cols) u += b.row_nnz(j);
  return u;
}

/// Products of one row in generation order: j ascending, then k ascending.
template <class T>
void expand_row(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b, std::vector<Index>& cols,
                std::vector<T>& values);

/// Implicit binary max-heap of (col, value) pairs at the head of a buffer
/// with the ordered, duplicate-free result growing backwards from the tail.
/// Among equal columns the earliest pushed entry pops first, so fused values
/// add up in generation order.
template <class T>
class HeapWorkspace {
 public:
  void reset(std::size_t capacity);
  /// Load phase; at most `capacity` pushes.
  void push(Index col, T value);
  /// One delete-max: the root is fused into the result head when the columns
  /// match, otherwise it becomes the new head. Returns false once the heap is
  /// empty.
  bool step(bool faulty_fusion = false);

  std::size_t heap_size() const { return heap_size_; }
  std::size_t capacity() const { return cols_.size(); }
  std::span<const Index> result_cols() const {
    return std::span<const Index>(cols_).subspan(result_begin_);
  }
  std::span<const T> result_values() const {
    return std::span<const T>(values_).subspan(result_begin_);
  }
  /// Heap and result regions are disjoint, and the result is strictly
  /// ascending.
  bool result_region_valid() const;

 private:
  bool before(std::size_t x, std::size_t y) const;  // x has higher priority
  void swap_entries(std::size_t x, std::size_t y);
  void sift_up(std::size_t pos);
  void sift_down(std::size_t pos);

  std::vector<Index> cols_;
  std::vector<T> values_;
  std::vector<std::uint32_t> seq_;
  std::size_t heap_size_ = 0;
  std::size_t result_begin_ = 0;
  std::uint32_t next_seq_ = 0;
};

/// Sorts pow2-length (key, value) arrays with a bitonic sorting network.
template <class T>
void bitonic_sort_pairs(std::span<std::uint64_t> keys, std::span<T> values);

/// Expansion / bitonic sort / compression scratch for one row.
template <class T>
struct EscWorkspace {
  std::vector<std::uint64_t> keys;  // (col << 32) | generation index; padding = all ones
  std::vector<T> values;
  std::vector<std::uint8_t> head_flags;
  std::vector<Offset> positions;  // inclusive scan of head_flags
};

/// Scratchpad stand-in for the merge method.
template <class T>
struct MergeWorkspace {
  std::vector<Index> result_cols;  // capacity-bounded, sorted, duplicate-free
  std::vector<T> result_values;
  Offset used = 0;
  std::vector<Index> staged_cols;  // a_ij * b_j*
  std::vector<T> staged_values;
  std::vector<std::uint8_t> duplicate_mask;
  std::vector<Offset> hit_position;
  std::vector<Offset> placement;  // exclusive scan over unmasked entries
  std::vector<Index> merge_cols;
  std::vector<T> merge_values;
  std::size_t checkpoint = 0;  // next unprocessed nonzero of a_i*
};

// Row kernels. Each computes c_i*, writes it into the row's slot of `tmp`,
// sets tmp.used(row) and returns it.

/// Rows with u_i in {0, 1}.
template <class T>
Offset kernel_trivial(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b, TempMatrix<T>& tmp);

/// Rows with 2 <= u_i <= 32.
template <class T>
Offset kernel_heap(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b, TempMatrix<T>& tmp,
                   const KernelOptions& options = {});

/// Rows with 33 <= u_i <= 512.
template <class T>
Offset kernel_bitonic_esc(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b,
                          TempMatrix<T>& tmp, const KernelOptions& options = {});

/// Rows with u_i > 512. The row's starting capacity in `tmp` is the
/// scratch size; whenever the next input row would not fit, the result is
/// dumped to `tmp`, the slot is doubled and the computation resumes at the
/// checkpoint. Throws std::logic_error if regrowth would exceed the hard cap.
template <class T>
Offset kernel_merge_insert(Index row, const CsrMatrix<T>& a, const CsrMatrix<T>& b,
                           TempMatrix<T>& tmp, const KernelOptions& options = {});

}  // namespace spgemm
