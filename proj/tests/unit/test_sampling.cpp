#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "kies/kies.hpp"
#include "kies/mixture.hpp"
#include "kies/sampling.hpp"

using kies::MixedKies;
using kies::MixingLaw;

namespace {

struct Named {
  std::string name;
  MixedKies model;
};

std::vector<Named> models() {
  return {
      {"degenerate", MixedKies(MixingLaw::degenerate(1.0), 1.0)},
      {"bimodal", MixedKies(MixingLaw::discrete({15.79, 0.7}, {0.3436, 0.6564}),
                            std::vector<double>{0.712, 6.4475})},
      {"multimodal",
       MixedKies(MixingLaw::discrete({0.1, 0.5, 5.0, 10.0}, {0.25, 0.25, 0.25, 0.25}), 2.0)},
      {"shifted_binomial", MixedKies(MixingLaw::shifted_binomial(10, 0.25), 2.0)},
      {"geometric", MixedKies(MixingLaw::geometric(0.25), 0.8)},
      {"exponential", MixedKies(MixingLaw::exponential(2.0), 2.0)},
      {"uniform", MixedKies(MixingLaw::exponential(1.0), 1.0)},
      {"gamma", MixedKies(MixingLaw::gamma(2.0, 1.0), 2.0)},
      {"gamma_low", MixedKies(MixingLaw::gamma(2.0, 5.0), 0.7)},
      {"beta", MixedKies(MixingLaw::beta(3.0, 1.0), 0.5)},
      {"affine_binomial", MixedKies(MixingLaw::affine(3.8, 2.8, MixingLaw::binomial(95, 0.0334)), 1.6)},
      {"affine_geometric",
       MixedKies(MixingLaw::affine(1.87, 0.97, MixingLaw::geometric(0.0322)), 0.8)},
      {"affine_exponential", MixedKies(MixingLaw::affine(2.0, 1.0, MixingLaw::exponential(1.0)), 2.0)},
      {"affine_gamma", MixedKies(MixingLaw::affine(6.93, 0.33, MixingLaw::gamma(2.2, 0.61)), 1.3)},
      {"affine_beta", MixedKies(MixingLaw::affine(3.96, 4.97, MixingLaw::beta(0.5, 0.3)), 0.9)},
  };
}

}  // namespace

TEST(MixQuantile, Examples) {
  EXPECT_NEAR(kies::mix_quantile(MixedKies(MixingLaw::exponential(1.0), 1.0), 0.42), 0.42, 1e-14);
  EXPECT_NEAR(kies::mix_quantile(MixedKies(MixingLaw::degenerate(1.0), 1.0), 1.0 - std::exp(-1.0)),
              0.5, 1e-12);
  const MixedKies g(MixingLaw::gamma(2.0, 1.0), 2.0);
  EXPECT_NEAR(kies::mix_cdf(g, kies::mix_quantile(g, 0.5)), 0.5, 1e-10);
  EXPECT_THROW(kies::mix_quantile(g, 0.0), std::domain_error);
  EXPECT_THROW(kies::mix_quantile(g, 1.0), std::domain_error);
}

TEST(MixQuantile, RoundTripAllFamilies) {
  for (const auto& [name, m] : models()) {
    for (int i = 1; i <= 99; ++i) {
      const double u = i / 100.0;
      const double t = kies::mix_quantile(m, u);
      ASSERT_GT(t, 0.0);
      ASSERT_LT(t, 1.0);
      EXPECT_NEAR(kies::mix_cdf(m, t), u, 1e-10) << name << " u=" << u;
    }
  }
}

TEST(Sample, ValuesInsideOpenInterval) {
  for (const auto& [name, m] : models()) {
    const auto b = kies::sample(m, 3, 20000);
    ASSERT_EQ(b.values.size(), 20000u);
    for (double v : b.values) {
      ASSERT_GT(v, 0.0) << name;
      ASSERT_LT(v, 1.0) << name;
    }
  }
}

TEST(Sample, KolmogorovSmirnovAllFamilies) {
  for (const auto& [name, m] : models()) {
    const auto b = kies::sample(m, 12345, 100000);
    const double ks = kies::ks_statistic(b.values, [&](double t) { return kies::mix_cdf(m, t); });
    EXPECT_LT(ks, kies::ks_critical_99(b.values.size())) << name;
  }
}

TEST(Sample, DegenerateAgainstKiesCdf) {
  const MixedKies m(MixingLaw::degenerate(1.0), 1.0);
  const auto b = kies::sample(m, 99, 100000);
  const kies::KiesParams p(1.0, 1.0);
  const double ks = kies::ks_statistic(b.values, [&](double t) { return kies::kies_cdf(p, t); });
  EXPECT_LT(ks, kies::ks_critical_99(100000));
}

TEST(Sample, UniformMean) {
  const auto b = kies::sample(MixedKies(MixingLaw::exponential(1.0), 1.0), 5, 100000);
  const double mean = std::accumulate(b.values.begin(), b.values.end(), 0.0) / b.values.size();
  EXPECT_NEAR(mean, 0.5, 0.005);
}

TEST(Sample, DeterministicAndThreadIndependent) {
  const MixedKies m(MixingLaw::discrete({0.1, 2.0}, {0.5, 0.5}), std::vector<double>{0.5, 3.0});
  const auto a = kies::sample(m, 7, 50000, 1);
  const auto b = kies::sample(m, 7, 50000, 1);
  const auto c = kies::sample(m, 7, 50000, 8);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.values, c.values);
  EXPECT_EQ(a.seed, 7u);
  EXPECT_EQ(a.law_descriptor, c.law_descriptor);
  EXPECT_NE(a.law_descriptor.find("discrete"), std::string::npos);
  const auto d = kies::sample(m, 8, 50000);
  EXPECT_NE(a.values, d.values);
  // a prefix of a longer batch is the shorter batch
  const auto e = kies::sample(m, 7, 60000, 3);
  EXPECT_TRUE(std::equal(a.values.begin(), a.values.end(), e.values.begin()));
}

TEST(McCdf, Basics) {
  const auto b = kies::sample(MixedKies(MixingLaw::exponential(1.0), 1.0), 11, 1000000);
  EXPECT_EQ(kies::mc_cdf(b, 1.0), 1.0);
  EXPECT_EQ(kies::mc_cdf(b, 0.0), 0.0);
  EXPECT_NEAR(kies::mc_cdf(b, 0.3), 0.3, 0.0015);
}

TEST(KsStatistic, KnownValue) {
  // sorted points 0.1, 0.5, 0.9 against the uniform CDF: max gap is 1/3 - 0.1 etc.
  const std::vector<double> v{0.9, 0.1, 0.5};
  const double ks = kies::ks_statistic(v, [](double t) { return t; });
  EXPECT_NEAR(ks, std::max({1.0 / 3 - 0.1, 0.1, 0.5 - 1.0 / 3, 2.0 / 3 - 0.5, 0.9 - 2.0 / 3, 1 - 0.9}),
              1e-15);
  EXPECT_NEAR(kies::ks_critical_99(10000), 0.016276, 1e-6);
}
