#include <gtest/gtest.h>

#include <bit>
#include <map>
#include <random>

#include "spgemm/kernels.hpp"
#include "spgemm/oracle.hpp"
#include "spgemm/pipeline.hpp"
#include "test_util.hpp"

namespace spgemm {
namespace {

using testing::Operands;
using testing::targeted_operands;

enum class Which { kTrivial, kHeap, kEsc, kMerge };

template <class T>
Offset run(Which which, Index row, const Operands<T>& ops, TempMatrix<T>& tmp,
           const KernelOptions& options = {}) {
  switch (which) {
    case Which::kTrivial: return kernel_trivial(row, ops.a, ops.b, tmp);
    case Which::kHeap: return kernel_heap(row, ops.a, ops.b, tmp, options);
    case Which::kEsc: return kernel_bitonic_esc(row, ops.a, ops.b, tmp, options);
    case Which::kMerge: return kernel_merge_insert(row, ops.a, ops.b, tmp, options);
  }
  return 0;
}

// Runs one kernel over every row, with capacity u_i (or `merge_start` for
// the merge kernel), and assembles the product.
template <class T>
CsrMatrix<T> product_with(Which which, const Operands<T>& ops, const KernelOptions& options = {},
                          Offset merge_start = 256) {
  const Index n = ops.a.num_rows();
  std::vector<Offset> caps(n);
  for (Index i = 0; i < n; ++i) {
    caps[i] = which == Which::kMerge ? merge_start : row_upper_bound(i, ops.a, ops.b);
  }
  TempMatrix<T> tmp(caps);
  std::vector<Offset> nnz(n);
  for (Index i = 0; i < n; ++i) nnz[i] = run(which, i, ops, tmp, options);
  return stage4_arrange(tmp, nnz, ops.b.num_cols(), 1);
}

TEST(Kernels, HandExample) {
  // A = [1 2; 0 3], B = [4 0 5; 0 6 7]
  Operands<double> ops{CsrMatrix<double>(2, 2, {0, 2, 3}, {0, 1, 1}, {1, 2, 3}),
                       CsrMatrix<double>(2, 3, {0, 2, 4}, {0, 2, 1, 2}, {4, 5, 6, 7}),
                       {}};
  const CsrMatrix<double> expected(2, 3, {0, 3, 5}, {0, 1, 2, 1, 2}, {4, 12, 19, 18, 21});
  for (Which w : {Which::kHeap, Which::kEsc, Which::kMerge}) {
    EXPECT_EQ(product_with(w, ops), expected) << static_cast<int>(w);
  }
}

TEST(Kernels, TrivialRows) {
  std::mt19937_64 rng(3);
  const auto ops = targeted_operands<double>(40, {0, 1}, rng);
  EXPECT_EQ(product_with(Which::kTrivial, ops), spgemm_gustavson(ops.a, ops.b));
  // a row with two products is outside the trivial kernel's range
  std::mt19937_64 rng2(3);
  const auto bad = targeted_operands<double>(40, {2}, rng2);
  TempMatrix<double> tmp(std::vector<Offset>(40, 2));
  EXPECT_THROW(kernel_trivial(0, bad.a, bad.b, tmp), std::logic_error);
}

// Row 0 of A picks B rows whose entries are the listed candidates, in order.
Operands<double> single_row(const std::vector<std::pair<Index, double>>& candidates) {
  const auto k = static_cast<Index>(candidates.size());
  std::vector<Offset> a_ptr = {0, k};
  std::vector<Index> a_cols(k);
  std::vector<Offset> b_ptr(k + 1);
  std::vector<Index> b_cols;
  std::vector<double> b_vals;
  for (Index j = 0; j < k; ++j) {
    a_cols[j] = j;
    b_cols.push_back(candidates[j].first);
    b_vals.push_back(candidates[j].second);
    b_ptr[j + 1] = j + 1;
  }
  return {CsrMatrix<double>(1, k, a_ptr, a_cols, std::vector<double>(k, 1.0)),
          CsrMatrix<double>(k, 16, b_ptr, b_cols, b_vals), {}};
}

std::vector<std::pair<Index, double>> row_of(const CsrMatrix<double>& c) {
  std::vector<std::pair<Index, double>> out;
  for (std::size_t p = 0; p < c.row(0).size(); ++p) out.push_back({c.row(0).cols[p], c.row(0).values[p]});
  return out;
}

TEST(Kernels, HeapFusionExample) {
  const auto ops = single_row({{5, 1.0}, {3, 2.0}, {5, 4.0}});
  const std::vector<std::pair<Index, double>> expected = {{3, 2.0}, {5, 5.0}};
  for (Which w : {Which::kHeap, Which::kEsc, Which::kMerge}) EXPECT_EQ(row_of(product_with(w, ops)), expected);
  const auto same = single_row({{7, 1.0}, {7, 2.0}, {7, 3.0}, {7, 4.0}});
  for (Which w : {Which::kHeap, Which::kEsc, Which::kMerge}) {
    EXPECT_EQ(row_of(product_with(w, same)), (std::vector<std::pair<Index, double>>{{7, 10.0}}));
  }
}

TEST(Kernels, SortedAndReversedCandidates) {
  std::vector<std::pair<Index, double>> sorted, reversed;
  for (Index c = 0; c < 16; ++c) sorted.push_back({c, 1.0 + c});
  reversed.assign(sorted.rbegin(), sorted.rend());
  for (Which w : {Which::kHeap, Which::kEsc, Which::kMerge}) {
    EXPECT_EQ(row_of(product_with(w, single_row(sorted))), sorted);
    EXPECT_EQ(row_of(product_with(w, single_row(reversed))), sorted);
  }
}

TEST(Kernels, TrivialSingleProduct) {
  // a_0* = {(0, 2.0)}, b_0* = {(3, 3.0)}
  Operands<double> ops{CsrMatrix<double>(2, 1, {0, 1, 1}, {0}, {2.0}),
                       CsrMatrix<double>(1, 5, {0, 1}, {3}, {3.0}), {}};
  EXPECT_EQ(product_with(Which::kTrivial, ops), CsrMatrix<double>(2, 5, {0, 1, 1}, {3}, {6.0}));
  const auto eye = identity<double>(3);
  EXPECT_EQ(product_with(Which::kTrivial, Operands<double>{eye, eye, {}}), eye);
}

TEST(Merge, DisjointAndContainedInputRows) {
  // second input row disjoint from the first, third contained in the union
  Operands<double> ops{CsrMatrix<double>(1, 3, {0, 3}, {0, 1, 2}, {1.0, 1.0, 2.0}),
                       CsrMatrix<double>(3, 8, {0, 3, 6, 8}, {0, 2, 4, 1, 3, 5, 2, 3},
                                         {1, 1, 1, 1, 1, 1, 1, 1}),
                       {}};
  const auto c = product_with(Which::kMerge, ops, {}, 2);
  EXPECT_EQ(c, CsrMatrix<double>(1, 8, {0, 6}, {0, 1, 2, 3, 4, 5}, {1, 1, 3, 3, 1, 1}));
}

class KernelEquivalence : public ::testing::TestWithParam<std::uint64_t> {};

// Every kernel, run on rows inside and outside its usual range, reproduces the
// oracle bit for bit: all of them add products in generation order.
TEST_P(KernelEquivalence, MatchesOracle) {
  std::mt19937_64 rng(GetParam());
  const bool positive = GetParam() % 2 == 0;
  const auto ops = targeted_operands<double>(96, {2, 3, 17, 32, 33, 90, 200, 512}, rng, positive);
  const auto expected = spgemm_gustavson(ops.a, ops.b);
  for (Which w : {Which::kHeap, Which::kEsc, Which::kMerge}) {
    const auto got = product_with(w, ops);
    EXPECT_TRUE(validate(got).empty());
    EXPECT_EQ(got, expected) << "kernel " << static_cast<int>(w);
    EXPECT_TRUE(compare(got, expected).ok());
  }
  std::mt19937_64 frng(GetParam());
  const auto fops = targeted_operands<float>(64, {5, 40, 300}, frng, positive);
  const auto fexpected = spgemm_gustavson(fops.a, fops.b);
  for (Which w : {Which::kHeap, Which::kEsc, Which::kMerge}) {
    EXPECT_EQ(product_with(w, fops), fexpected);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, KernelEquivalence, ::testing::Range<std::uint64_t>(1, 13));

TEST(Heap, RegionsStayDisjointAndOrdered) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t u = 2 + rng() % 31;
    HeapWorkspace<double> ws;
    ws.reset(u);
    std::map<Index, double> expected;
    for (std::size_t p = 0; p < u; ++p) {
      const Index col = static_cast<Index>(rng() % 12);
      ws.push(col, 1.0);
      expected[col] += 1.0;
    }
    ASSERT_TRUE(ws.result_region_valid());
    while (ws.step()) ASSERT_TRUE(ws.result_region_valid());
    EXPECT_EQ(ws.heap_size(), 0u);
    const auto cols = ws.result_cols();
    const auto vals = ws.result_values();
    ASSERT_EQ(cols.size(), expected.size());
    std::size_t p = 0;
    for (const auto& [c, v] : expected) {
      EXPECT_EQ(cols[p], c);
      EXPECT_EQ(vals[p], v);
      ++p;
    }
  }
}

TEST(Heap, OverflowIsRejected) {
  HeapWorkspace<double> ws;
  ws.reset(2);
  ws.push(1, 1.0);
  ws.push(2, 1.0);
  EXPECT_THROW(ws.push(3, 1.0), std::logic_error);
}

TEST(Bitonic, SortIsAPermutation) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 1024; n *= 2) {
    std::vector<std::uint64_t> keys(n);
    std::vector<double> vals(n);
    for (std::size_t p = 0; p < n; ++p) {
      keys[p] = (rng() % 64) << 32 | p;
      vals[p] = static_cast<double>(keys[p]);
    }
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    bitonic_sort_pairs(std::span<std::uint64_t>(keys), std::span<double>(vals));
    EXPECT_EQ(keys, sorted);
    for (std::size_t p = 0; p < n; ++p) EXPECT_EQ(vals[p], static_cast<double>(keys[p]));
  }
  std::vector<std::uint64_t> keys(3);
  std::vector<double> vals(3);
  EXPECT_THROW(bitonic_sort_pairs(std::span<std::uint64_t>(keys), std::span<double>(vals)),
               std::invalid_argument);
}

TEST(Esc, CapacityTooSmallIsAnError) {
  std::mt19937_64 rng(2);
  const auto ops = targeted_operands<double>(64, {40}, rng);
  TempMatrix<double> tmp(std::vector<Offset>(64, 1));
  EXPECT_THROW(kernel_bitonic_esc(0, ops.a, ops.b, tmp), Error);
}

TEST(Merge, RegrowthDoublesFromStartUntilTheRowFits) {
  std::mt19937_64 rng(9);
  const auto ops = targeted_operands<double>(1500, {2500, 700, 5000}, rng);
  const auto expected = spgemm_gustavson(ops.a, ops.b);
  for (RegrowMode mode : {RegrowMode::kFreshBlock, RegrowMode::kInPlace}) {
    std::vector<Offset> caps(3, 256);
    TempMatrix<double> tmp(caps, mode);
    Operands<double> three{
        CsrMatrix<double>(3, 1500,
                          std::vector<Offset>(ops.a.row_ptr().begin(), ops.a.row_ptr().begin() + 4),
                          std::vector<Index>(ops.a.col_idx().begin(),
                                             ops.a.col_idx().begin() + ops.a.row_ptr()[3]),
                          std::vector<double>(ops.a.values().begin(),
                                              ops.a.values().begin() + ops.a.row_ptr()[3])),
        ops.b,
        {}};
    for (Index i = 0; i < 3; ++i) {
      const Offset nnz = kernel_merge_insert(i, three.a, three.b, tmp);
      ASSERT_EQ(nnz, expected.row_nnz(i));
      const auto row = expected.row(i);
      EXPECT_TRUE(std::ranges::equal(tmp.cols(i), row.cols));
      EXPECT_TRUE(std::ranges::equal(tmp.values(i), row.values));
      EXPECT_EQ(tmp.capacity(i), hybrid_final_capacity(row_upper_bound(i, ops.a, ops.b), nnz));
    }
    const auto log = tmp.realloc_log();
    std::map<Index, Offset> last;
    for (const auto& e : log) {
      const Offset prev = last.count(e.row) ? last[e.row] : 256;
      EXPECT_EQ(e.old_capacity, prev);
      EXPECT_EQ(e.new_capacity, 2 * prev);
      last[e.row] = e.new_capacity;
    }
    for (Index i = 0; i < 3; ++i) {
      EXPECT_EQ(last.count(i) ? last[i] : 256, tmp.capacity(i));
    }
    if (mode == RegrowMode::kInPlace) EXPECT_EQ(tmp.bytes_copied(), 0u);
  }
}

// Restarting from the checkpoint after each overflow gives the same row as a
// run whose scratch never overflows, for every starting capacity and lane
// count.
TEST(Merge, CheckpointResumeMatchesUnboundedRun) {
  std::mt19937_64 rng(21);
  const auto ops = targeted_operands<double>(700, {513, 900, 1400, 3000}, rng, false);
  Offset max_u = 0;
  for (Index i = 0; i < 700; ++i) max_u = std::max(max_u, row_upper_bound(i, ops.a, ops.b));
  const auto unbounded = product_with(Which::kMerge, ops, {}, max_u);
  EXPECT_EQ(unbounded, spgemm_gustavson(ops.a, ops.b));
  for (Offset start : {1u, 3u, 64u, 256u}) {
    for (unsigned lanes : {1u, 2u, 7u, 32u}) {
      KernelOptions options;
      options.merge_lanes = lanes;
      EXPECT_EQ(product_with(Which::kMerge, ops, options, start), unbounded)
          << "start " << start << " lanes " << lanes;
    }
  }
  KernelOptions serial;
  serial.serial_merge = true;
  EXPECT_EQ(product_with(Which::kMerge, ops, serial, 256), unbounded);
}

TEST(Merge, HardCapIsEnforced) {
  std::mt19937_64 rng(4);
  const auto ops = targeted_operands<double>(800, {2000}, rng);
  ASSERT_GT(spgemm_gustavson(ops.a, ops.b).row_nnz(0), 512u);
  TempMatrix<double> tmp(std::vector<Offset>(800, 256));
  KernelOptions options;
  options.merge_hard_cap = 512;
  EXPECT_THROW(kernel_merge_insert(0, ops.a, ops.b, tmp, options), std::logic_error);
}

TEST(Faults, EveryInjectedFaultIsVisible) {
  std::mt19937_64 rng(8);
  // many repeated columns so fusion happens in every kernel
  const auto ops = targeted_operands<double>(40, {20, 200, 600}, rng);
  const auto expected = spgemm_gustavson(ops.a, ops.b);
  const std::pair<Which, FaultInjection> cases[] = {{Which::kHeap, FaultInjection::kHeapFusion},
                                                    {Which::kEsc, FaultInjection::kEscFusion},
                                                    {Which::kMerge, FaultInjection::kMergeFusion}};
  for (const auto& [w, f] : cases) {
    KernelOptions options;
    options.fault = f;
    EXPECT_FALSE(compare(product_with(w, ops, options), expected).ok()) << static_cast<int>(w);
  }
}

}  // namespace
}  // namespace spgemm
