#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "kies/random.hpp"

using kies::RandomStream;

TEST(RandomStream, SameSeedSameSequence) {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, StreamsDiffer) {
  RandomStream a(42, 0), b(42, 1);
  int same = 0;
  for (int i = 0; i < 1000; ++i) same += a.next_u64() == b.next_u64();
  EXPECT_EQ(same, 0);
}

TEST(RandomStream, SubstreamIndependentOfConsumptionOrder) {
  const RandomStream root(7);
  std::vector<double> forward, backward(100);
  for (int j = 0; j < 100; ++j) forward.push_back(root.substream(j).uniform());
  for (int j = 99; j >= 0; --j) backward[j] = root.substream(j).uniform();
  EXPECT_EQ(forward, backward);
}

TEST(RandomStream, UniformIsOpenInterval) {
  RandomStream r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomStream, UniformMoments) {
  RandomStream r(3);
  const int n = 1'000'000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 2e-3);
}

TEST(RandomStream, NormalMoments) {
  RandomStream r(5);
  const int n = 500'000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

class GammaMoments : public ::testing::TestWithParam<double> {};

TEST_P(GammaMoments, MeanAndVarianceEqualShape) {
  const double shape = GetParam();
  RandomStream r(11);
  const int n = 400'000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = r.gamma(shape);
    ASSERT_GT(g, 0.0);
    s += g;
    s2 += g * g;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, shape, 5 * std::sqrt(shape / n));
  EXPECT_NEAR(var / shape, 1.0, 0.03);
}

INSTANTIATE_TEST_SUITE_P(Shapes, GammaMoments, ::testing::Values(0.3, 1.0, 2.5, 7.39));

TEST(Mix64, KnownSplitMixOutput) {
  // First output of the reference SplitMix64 with state 0.
  EXPECT_EQ(kies::mix64(0x9E3779B97F4A7C15ULL), 0xE220A8397B1DCDAFULL);
}
