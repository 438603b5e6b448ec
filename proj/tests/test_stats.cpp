#include "dqest/core.hpp"
#include "dqest/rng.hpp"
#include "dqest/stats.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace dqest;

TEST(TDistribution, TableValues) {
  EXPECT_DOUBLE_EQ(t_cdf(0.0, 7.0), 0.5);
  EXPECT_NEAR(t_cdf(2.086, 20.0), 0.975, 5e-5);
  EXPECT_NEAR(t_quantile(0.995, 19.0), 2.861, 5e-4);
  EXPECT_NEAR(t_quantile(0.5, 4.0), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(t_cdf(std::numeric_limits<double>::infinity(), 3.0), 1.0);
  EXPECT_NEAR(t_cdf(1e8, 3.0), 1.0, 1e-12);
}

TEST(TDistribution, MatchesNumericIntegrationOracle) {
  for (double df : {1.0, 2.5, 5.0, 19.0, 60.0, 198.0}) {
    for (double x : {-6.0, -2.5, -1.0, -0.3, 0.2, 0.9, 1.7, 3.2, 8.0}) {
      EXPECT_NEAR(t_cdf(x, df), oracle::t_cdf(x, df), 1e-6) << "x=" << x << " df=" << df;
    }
  }
}

TEST(TDistribution, QuantileRoundTrip) {
  Rng rng = make_rng(1, "tq");
  for (int i = 0; i < 200; ++i) {
    const double p = 0.001 + 0.998 * uniform01(rng);
    const double df = 1.0 + 100.0 * uniform01(rng);
    EXPECT_NEAR(t_cdf(t_quantile(p, df), df), p, 1e-7);
  }
  EXPECT_THROW(t_quantile(0.0, 3.0), ValidationError);
  EXPECT_THROW(t_quantile(1.0, 3.0), ValidationError);
  EXPECT_THROW(t_cdf(1.0, 0.0), ValidationError);
}

TEST(IncompleteBeta, KnownValues) {
  EXPECT_NEAR(incomplete_beta(1.0, 1.0, 0.3), 0.3, 1e-14);
  EXPECT_NEAR(incomplete_beta(2.0, 3.0, 0.4), 0.5248, 1e-12);
  EXPECT_DOUBLE_EQ(incomplete_beta(2.0, 2.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(incomplete_beta(2.0, 2.0, 1.0), 1.0);
}

TEST(ShiftedTest, EqualSamplesFavorTheNull) {
  const std::vector<double> a{0.1, 0.2, 0.3, 0.25}, b = a;
  const TestResult r = shifted_one_tailed_test(a, b, 0.01);
  EXPECT_LT(r.statistic, 0.0);
  EXPECT_GT(r.pValue, 0.5);
}

TEST(ShiftedTest, DifferenceExactlyD) {
  const std::vector<double> b{0.1, 0.2, 0.3, 0.4};
  std::vector<double> a;
  for (double v : b) a.push_back(v + 0.25);
  const TestResult r = shifted_one_tailed_test(a, b, 0.25);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  EXPECT_NEAR(r.pValue, 0.5, 1e-12);
}

TEST(ShiftedTest, LargeOffsetAgainstOracle) {
  std::vector<double> a, b;
  for (int i = 0; i < 10; ++i) {
    b.push_back(0.1 + 0.001 * i);
    a.push_back(0.6 + 0.001 * ((i * 7) % 10));
  }
  const TestResult r = shifted_one_tailed_test(a, b, 0.01);
  EXPECT_LT(r.pValue, 1e-6);
  EXPECT_NEAR(r.pValue, 1.0 - oracle::t_cdf(r.statistic, r.degreesOfFreedom), 1e-9);
}

TEST(ShiftedTest, WelchStatisticByHand) {
  const std::vector<double> a{1.0, 2.0, 3.0}, b{0.0, 0.0, 1.0, 1.0};
  // var(a) = 1, var(b) = 1/3; se^2 = 1/3 + 1/12 = 5/12.
  const double se2 = 5.0 / 12.0;
  const TestResult r = shifted_one_tailed_test(a, b, 0.5);
  EXPECT_NEAR(r.statistic, (2.0 - 0.5 - 0.5) / std::sqrt(se2), 1e-12);
  const double df = se2 * se2 / ((1.0 / 3.0) * (1.0 / 3.0) / 2.0 + (1.0 / 12.0) * (1.0 / 12.0) / 3.0);
  EXPECT_NEAR(r.degreesOfFreedom, df, 1e-12);
}

TEST(ShiftedTest, MutualExclusionOnRandomPairs) {
  Rng rng = make_rng(7, "mutex");
  const double d = 0.01, alpha = 0.02;
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 60);
    const double shift = 0.1 * (uniform01(rng) - 0.5);
    const double spread = 0.001 + 0.1 * uniform01(rng);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 0.1 + shift + spread * standard_normal(rng);
      b[i] = 0.1 + spread * standard_normal(rng);
    }
    const bool rejectA = shifted_one_tailed_test(a, b, d).pValue < alpha;
    const bool rejectB = shifted_one_tailed_test(b, a, d).pValue < alpha;
    violations += rejectA && rejectB;
  }
  EXPECT_EQ(violations, 0);
}

TEST(PairedTest, KnownStatistic) {
  const std::vector<double> a{1.0, 2.0, 3.0, 4.0}, b{0.5, 1.0, 2.0, 3.5};
  // differences 0.5, 1, 1, 0.5: mean 0.75, sd 0.288675
  const TestResult r = paired_t_test(a, b);
  EXPECT_NEAR(r.statistic, 0.75 / (std::sqrt(1.0 / 12.0) / 2.0), 1e-9);
  EXPECT_NEAR(r.pValue, 2.0 * (1.0 - oracle::t_cdf(r.statistic, 3.0)), 1e-7);
  EXPECT_DOUBLE_EQ(paired_t_test(a, a).pValue, 1.0);
}

TEST(MeanCi, HalfWidthFromTable) {
  // 20 values with mean 0.75 and sample sd 0.05.
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) {
    v.push_back(0.75 + 0.05 * std::sqrt(19.0 / 20.0));
    v.push_back(0.75 - 0.05 * std::sqrt(19.0 / 20.0));
  }
  ASSERT_NEAR(std::sqrt(sample_variance(v)), 0.05, 1e-12);
  const Interval ci = mean_ci(v, 0.01);
  EXPECT_NEAR(0.5 * (ci.upper - ci.lower), 0.0320, 5e-5);
  EXPECT_LT(ci.lower, 0.75);
  EXPECT_GT(ci.upper, 0.75);
}

TEST(MeanCi, ConstantSampleCollapses) {
  const Interval ci = mean_ci(std::vector<double>{0.7, 0.7, 0.7}, 0.01);
  EXPECT_NEAR(ci.lower, 0.7, 1e-12);
  EXPECT_NEAR(ci.upper, 0.7, 1e-12);
  EXPECT_THROW(mean_ci(std::vector<double>{0.7}, 0.01), ValidationError);
}
