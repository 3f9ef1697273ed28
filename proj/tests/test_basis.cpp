#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cvb/basis.hpp"
#include "oracles.hpp"

namespace cvb {
namespace {

TEST(ChebEval, LowOrderValues) {
  EXPECT_EQ(cheb_eval(0, 0.37), 1.0);
  EXPECT_EQ(cheb_eval(1, -0.5), -0.5);
  EXPECT_EQ(cheb_eval(2, 0.0), -1.0);
  EXPECT_EQ(cheb_eval(2, 1.0), 1.0);
}

TEST(ChebEval, MatchesCosineFormOnFineGrid) {
  for (std::size_t j = 2; j <= 40; ++j) {
    for (int k = 0; k <= 2000; ++k) {
      const double x = -1.0 + k / 1000.0;
      ASSERT_NEAR(cheb_eval(j, x), oracle::cheb_cos(j, x), 1e-9) << "j=" << j << " x=" << x;
    }
  }
}

TEST(ChebEval, BoundedOnInterval) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    const auto j = static_cast<std::size_t>(gen() % 60);
    EXPECT_LE(std::abs(cheb_eval(j, U(gen))), 1.0 + 1e-9);
  }
}

TEST(ChebEval, ClampsWithinSlackAndRejectsBeyond) {
  EXPECT_EQ(cheb_eval(3, 1.0 + 5e-13), 1.0);
  EXPECT_EQ(cheb_eval(3, -1.0 - 5e-13), -1.0);
  EXPECT_THROW((void)cheb_eval(2, 1.0 + 1e-9), DomainError);
  EXPECT_THROW((void)cheb_eval(2, -1.5), DomainError);
  EXPECT_THROW((void)cheb_eval(0, std::nan("")), DomainError);
}

TEST(ChebZeros, SmallOrders) {
  const auto z1 = cheb_zeros(1);
  ASSERT_EQ(z1.size(), 1u);
  EXPECT_NEAR(z1[0], 0.0, 1e-16);

  const auto z2 = cheb_zeros(2);
  EXPECT_NEAR(z2[0], std::cos(std::numbers::pi / 4), 1e-16);
  EXPECT_NEAR(z2[1], std::cos(3 * std::numbers::pi / 4), 1e-16);

  // roots of 4x^3 - 3x
  const auto z3 = cheb_zeros(3);
  EXPECT_NEAR(z3[0], std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(z3[1], 0.0, 1e-15);
  EXPECT_NEAR(z3[2], -std::sqrt(3.0) / 2, 1e-15);

  EXPECT_THROW((void)cheb_zeros(0), ArgumentError);
}

TEST(ChebZeros, AreRootsAndDescending) {
  for (std::size_t n = 1; n <= 64; ++n) {
    const auto z = cheb_zeros(n);
    ASSERT_EQ(z.size(), n);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_LE(std::abs(cheb_eval(n, z[j])), 1e-12) << "n=" << n << " j=" << j;
      if (j > 0) EXPECT_LT(z[j], z[j - 1]);
    }
  }
}

TEST(ChebZeros, ConsecutiveOrdersShareNoZero) {
  for (std::size_t n = 1; n <= 64; ++n) {
    const auto a = cheb_zeros(n);
    const auto b = cheb_zeros(n + 1);
    for (double x : a)
      for (double y : b) EXPECT_GT(std::abs(x - y), 1e-9) << "n=" << n;
  }
}

TEST(DomainMap, EndpointsExactAndRoundTrip) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(-1e4, 1e4);
  for (int t = 0; t < 500; ++t) {
    double lo = U(gen), hi = U(gen);
    if (lo == hi) continue;
    if (lo > hi) std::swap(lo, hi);
    const DomainMap map(lo, hi);
    EXPECT_EQ(map.forward(lo), -1.0);
    EXPECT_EQ(map.forward(hi), 1.0);
    std::uniform_real_distribution<double> In(lo, hi);
    for (int k = 0; k < 10; ++k) {
      const double x = In(gen);
      const double scale = std::max({std::abs(x), std::abs(lo), std::abs(hi)});
      EXPECT_NEAR(map.backward(map.forward(x)), x, 1e-14 * scale);
    }
  }
}

TEST(DomainMap, RejectsEmptyInterval) {
  EXPECT_THROW(DomainMap(1.0, 1.0), ArgumentError);
  EXPECT_THROW(DomainMap(2.0, 1.0), ArgumentError);
  EXPECT_TRUE(DomainMap{}.is_identity());
}

TEST(DomainMap, CoveringPadsByOnePercent) {
  const std::vector<double> v{0.0, 100.0, 50.0};
  const auto map = DomainMap::covering(v);
  EXPECT_DOUBLE_EQ(map.lo(), -1.0);
  EXPECT_DOUBLE_EQ(map.hi(), 101.0);
  EXPECT_GT(map.forward(0.0), -1.0);
  EXPECT_LT(map.forward(100.0), 1.0);
}

TEST(TermVector, UnivariateTableColumns) {
  const SampleSet1D s({{-1.0, 0.0}, {0.0, 1.0}, {1.0, 4.0}});
  EXPECT_EQ(term_vector_1d(0, s).components, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(term_vector_1d(1, s).components, (std::vector<double>{-1, 0, 1}));
  EXPECT_EQ(term_vector_1d(2, s).components, (std::vector<double>{1, -1, 1}));
  EXPECT_EQ(term_vector_1d(2, s).index, (TermIndex{2, 0}));
}

TEST(TermVector, Bivariate) {
  const SampleSet2D s({{0.5, -0.5, 0.0}, {0.1, 0.9, 0.0}});
  for (double c : term_vector_2d(0, 0, s).components) EXPECT_EQ(c, 1.0);
  EXPECT_EQ(term_vector_2d(1, 0, s).components[0], 0.5);
  EXPECT_EQ(term_vector_2d(1, 1, s).components[0], -0.25);
  EXPECT_EQ(term_vector_2d(1, 1, s).size(), s.size());
}

TEST(SampleSet, Validation) {
  EXPECT_THROW(SampleSet1D(std::vector<Point1D>{}), ArgumentError);
  EXPECT_THROW(SampleSet1D({{0.1, 1.0}, {0.1, 2.0}}), ValidationError);
  EXPECT_THROW(SampleSet1D({{0.1, 1.0}, {0.1 + 1e-13, 2.0}}), ValidationError);
  EXPECT_THROW(SampleSet1D({{1.5, 1.0}}), ValidationError);
  EXPECT_NO_THROW(SampleSet1D({{0.1, 1.0}, {0.1 + 1e-9, 2.0}}));
  EXPECT_THROW(SampleSet2D({{0.1, 0.2, 1.0}, {0.1, 0.2, 3.0}}), ValidationError);
  EXPECT_NO_THROW(SampleSet2D({{0.1, 0.2, 1.0}, {0.1, 0.3, 3.0}}));
  EXPECT_THROW(SampleSet2D({{0.1, 1.2, 1.0}}), ValidationError);
}

TEST(VisitOrderLess, RanksByDegreeThenMinThenI) {
  VisitOrderLess less;
  EXPECT_TRUE(less({0, 1}, {1, 0}));
  EXPECT_TRUE(less({2, 0}, {1, 1}));
  EXPECT_TRUE(less({1, 1}, {0, 3}));
  EXPECT_FALSE(less({1, 0}, {1, 0}));
}

}  // namespace
}  // namespace cvb
