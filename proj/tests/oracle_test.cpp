#include <gtest/gtest.h>

#include <random>

#include "spgemm/oracle.hpp"
#include "spgemm/random.hpp"
#include "spgemm/stencil.hpp"
#include "test_util.hpp"

namespace spgemm {
namespace {

TEST(Oracle, IdentityTimesIdentity) {
  const auto i = identity<double>(5);
  EXPECT_EQ(spgemm_gustavson(i, i), i);
  EXPECT_EQ(spgemm_dense_check(i, i), i);
}

TEST(Oracle, NilpotentSquareIsEmpty) {
  const CsrMatrix<double> n(2, 2, {0, 1, 1}, {1}, {1.0});
  const auto c = spgemm_gustavson(n, n);
  EXPECT_EQ(c.nnz(), 0u);
  EXPECT_EQ(c.num_rows(), 2u);
  EXPECT_TRUE(validate(c).empty());
}

TEST(Oracle, UpperTriangularSquare) {
  const CsrMatrix<double> a(2, 2, {0, 2, 3}, {0, 1, 1}, {1.0, 1.0, 1.0});
  const CsrMatrix<double> expected(2, 2, {0, 2, 3}, {0, 1, 1}, {1.0, 2.0, 1.0});
  EXPECT_EQ(spgemm_gustavson(a, a), expected);
  EXPECT_EQ(spgemm_dense_check(a, a), expected);
}

TEST(Oracle, CancellationKeepsStructuralZero) {
  // [1 1] * [1; -1] = 0, still one stored entry
  const CsrMatrix<double> a(1, 2, {0, 2}, {0, 1}, {1.0, 1.0});
  const CsrMatrix<double> b(2, 1, {0, 1, 2}, {0, 0}, {1.0, -1.0});
  for (const auto& c : {spgemm_gustavson(a, b), spgemm_dense_check(a, b)}) {
    ASSERT_EQ(c.nnz(), 1u);
    EXPECT_EQ(c.values()[0], 0.0);
  }
}

TEST(Oracle, RectangularShapes) {
  const auto a = random_csr<double>(7, 3, 0.5, 1);
  const auto b = random_csr<double>(3, 11, 0.5, 2);
  const auto c = spgemm_gustavson(a, b);
  EXPECT_EQ(c.num_rows(), 7u);
  EXPECT_EQ(c.num_cols(), 11u);
  EXPECT_THROW(spgemm_gustavson(a, a), DimensionMismatch);
  EXPECT_THROW(spgemm_dense_check(a, a), DimensionMismatch);
}

TEST(Oracle, DenseCheckRefusesLargeProducts) {
  const auto big = identity<double>(1u << 13);
  EXPECT_THROW(spgemm_dense_check(big, big), Error);
}

// Products and values of an independent dense formulation agree with the
// sparse oracle on random inputs of varying density.
TEST(Oracle, GustavsonMatchesDense) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::mt19937_64 rng(seed);
    const Index m = 1 + rng() % 30, k = 1 + rng() % 30, n = 1 + rng() % 30;
    const double density = 0.02 + 0.3 * (rng() % 100) / 100.0;
    const auto a = random_csr<double>(m, k, density, seed * 3);
    const auto b = random_csr<double>(k, n, density, seed * 3 + 1);
    const auto cmp = compare(spgemm_gustavson(a, b), spgemm_dense_check(a, b));
    EXPECT_TRUE(cmp.ok()) << "seed " << seed << ": " << cmp.first_difference;
  }
}

TEST(Oracle, CountFlopsByEnumeration) {
  std::mt19937_64 rng(7);
  const auto ops = testing::targeted_operands<double>(64, {0, 1, 5, 40, 100}, rng);
  std::uint64_t products = 0;
  for (Index i = 0; i < ops.a.num_rows(); ++i) {
    for (Index j : ops.a.row(i).cols) {
      for ([[maybe_unused]] Index k : ops.b.row(j).cols) ++products;
    }
  }
  EXPECT_EQ(count_flops(ops.a, ops.b), 2 * products);
}

TEST(Oracle, PoissonSquareRowsAreSymmetric) {
  const auto a = gen_poisson<double>(Stencil::k2d5pt, {6, 6});
  const auto c = spgemm_gustavson(a, a);
  const auto d = to_dense(c);
  for (std::size_t i = 0; i < 36; ++i) {
    for (std::size_t j = 0; j < 36; ++j) EXPECT_EQ(d[i * 36 + j], d[j * 36 + i]);
  }
  // interior point: 13 reachable points within distance 2, diagonal 4*4 + 4
  const Index centre = 2 + 6 * 2;
  EXPECT_EQ(c.row_nnz(centre), 13u);
  EXPECT_EQ(d[centre * 36 + centre], 20.0);
}

TEST(Compare, ReportsPatternAndValueDifferences) {
  const CsrMatrix<double> x(1, 3, {0, 2}, {0, 1}, {1.0, 2.0});
  const CsrMatrix<double> y(1, 3, {0, 2}, {0, 2}, {1.0, 2.0});
  const CsrMatrix<double> z(1, 3, {0, 2}, {0, 1}, {1.0, 2.0 + 1e-9});
  EXPECT_FALSE(compare(x, y).pattern_equal);
  EXPECT_FALSE(compare(x, z).ok());
  EXPECT_TRUE(compare(x, z, 1e-6).ok());
  EXPECT_GT(compare(x, z).max_relative_error, 0.0);
  EXPECT_FALSE(compare(x, identity<double>(3)).shape_equal);
}

TEST(Compare, ZeroAgainstZeroIsEqual) {
  const CsrMatrix<float> x(1, 1, {0, 1}, {0}, {0.0f});
  EXPECT_TRUE(compare(x, x).ok());
}

}  // namespace
}  // namespace spgemm
