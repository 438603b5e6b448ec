#include "dqest/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace dqest;

TEST(Rng, DerivedSeedsDependOnTagAndIndex) {
  EXPECT_EQ(derive_seed(7, "cohort", 3), derive_seed(7, "cohort", 3));
  EXPECT_NE(derive_seed(7, "cohort", 3), derive_seed(7, "cohort", 4));
  EXPECT_NE(derive_seed(7, "cohort", 3), derive_seed(7, "learner", 3));
  EXPECT_NE(derive_seed(7, "cohort", 3), derive_seed(8, "cohort", 3));
}

TEST(Rng, SameSeedSameStream) {
  Rng a = make_rng(42, "x"), b = make_rng(42, "x");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, UniformIndexStaysInRange) {
  Rng rng = make_rng(1, "u");
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[uniform_index(rng, 7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_THROW(uniform_index(rng, 0), std::invalid_argument);
}

TEST(Rng, Uniform01IsHalfOpen) {
  Rng rng = make_rng(3, "u01");
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, SampleWithoutReplacementIsDistinct) {
  Rng rng = make_rng(5, "s");
  const auto picks = sample_without_replacement(50, 20, rng);
  ASSERT_EQ(picks.size(), 20u);
  std::set<std::size_t> unique(picks.begin(), picks.end());
  EXPECT_EQ(unique.size(), 20u);
  for (auto p : picks) EXPECT_LT(p, 50u);
  EXPECT_EQ(sample_without_replacement(10, 10, rng).size(), 10u);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng = make_rng(9, "shuffle");
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i;
  shuffle(std::span<int>(v), rng);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_NE(v, sorted);
}

TEST(Rng, StandardNormalMoments) {
  Rng rng = make_rng(11, "normal");
  double sum = 0.0, sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}
