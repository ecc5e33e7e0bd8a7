#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "kies/kies.hpp"

using kies::Direction;
using kies::KiesParams;
using kies::ShapeCase;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Values of 1 - exp(-1) and 4 exp(-1) to 17 significant digits.
constexpr double kOneMinusInvE = 0.63212055882855768;
constexpr double kFourInvE = 1.4715177646857693;

double integrate_pdf(const KiesParams& p) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(
      [&](double t) { return (t <= 0.0 || t >= 1.0) ? 0.0 : kies::kies_pdf(p, t); }, 0.0, 1.0);
}

}  // namespace

TEST(KiesParams, RejectsNonPositive) {
  EXPECT_THROW(KiesParams(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(KiesParams(1.0, -2.0), std::invalid_argument);
  EXPECT_THROW(KiesParams(kInf, 1.0), std::invalid_argument);
  EXPECT_THROW(KiesParams(1.0, std::nan("")), std::invalid_argument);
}

TEST(KiesCdf, Endpoints) {
  const KiesParams p(1.0, 1.0);
  EXPECT_EQ(kies::kies_cdf(p, 0.0), 0.0);
  EXPECT_EQ(kies::kies_cdf(p, 1.0), 1.0);
  EXPECT_EQ(kies::kies_ccdf(KiesParams(2.0, 2.0), 0.0), 1.0);
  EXPECT_EQ(kies::kies_ccdf(KiesParams(0.1, 2.0), 1.0), 0.0);
}

TEST(KiesCdf, HalfPointValues) {
  const KiesParams p(1.0, 1.0);
  EXPECT_NEAR(kies::kies_cdf(p, 0.5), kOneMinusInvE, 1e-15);
  EXPECT_NEAR(kies::kies_ccdf(p, 0.5), 1.0 - kOneMinusInvE, 1e-15);
  EXPECT_NEAR(kies::kies_pdf(p, 0.5), kFourInvE, 1e-14);
}

TEST(KiesCdf, DomainErrors) {
  const KiesParams p(1.0, 1.0);
  EXPECT_THROW(kies::kies_cdf(p, -0.1), std::domain_error);
  EXPECT_THROW(kies::kies_ccdf(p, 1.5), std::domain_error);
  EXPECT_THROW(kies::kies_pdf(p, 0.0), std::domain_error);
  EXPECT_THROW(kies::kies_pdf(p, 1.0), std::domain_error);
  EXPECT_THROW(kies::kies_quantile(p, 0.0), std::domain_error);
  EXPECT_THROW(kies::kies_quantile(p, 1.0), std::domain_error);
}

TEST(KiesCdf, NoOverflowNearOne) {
  const double t = std::nextafter(1.0, 0.0);
  for (double beta : {0.3, 1.0, 5.0, 40.0}) {
    const KiesParams p(2.0, beta);
    EXPECT_EQ(kies::kies_cdf(p, t), 1.0);
    EXPECT_EQ(kies::kies_ccdf(p, t), 0.0);
    const double f = kies::kies_pdf(p, t);
    EXPECT_TRUE(std::isfinite(f));
    EXPECT_EQ(f, 0.0);
  }
}

TEST(KiesCdf, CcdfAccurateInUpperTail) {
  // 1 - cdf loses everything here; the direct form keeps full relative accuracy.
  const KiesParams p(1.0, 1.0);
  const double t = 0.97;  // s = 97/3
  EXPECT_NEAR(kies::kies_ccdf(p, t) / std::exp(-0.97 / 0.03), 1.0, 1e-12);
}

TEST(KiesCdf, Monotone) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> lam(0.05, 20.0), beta(0.2, 6.0);
  for (int k = 0; k < 50; ++k) {
    const KiesParams p(lam(gen), beta(gen));
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = kies::kies_cdf(p, i / 1000.0);
      ASSERT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(KiesPdf, LeftLimits) {
  EXPECT_EQ(kies::kies_pdf_left_limit(KiesParams(3.0, 1.0)), 3.0);
  EXPECT_EQ(kies::kies_pdf_left_limit(KiesParams(1.0, 2.0)), 0.0);
  EXPECT_EQ(kies::kies_pdf_left_limit(KiesParams(1.0, 0.5)), kInf);
  EXPECT_EQ(kies::kies_pdf_right_limit(KiesParams(1.0, 0.5)), 0.0);
  EXPECT_NEAR(kies::kies_pdf(KiesParams(3.0, 1.0), 1e-12), 3.0, 1e-9);
}

TEST(KiesPdf, Normalised) {
  for (auto [l, b] : {std::pair{1.0, 1.0}, {0.1, 2.0}, {2.0, 0.5}, {15.79, 0.712}, {7.055, 1.1895},
                      {0.5, 3.0}}) {
    EXPECT_NEAR(integrate_pdf(KiesParams(l, b)), 1.0, 1e-8) << l << " " << b;
  }
}

TEST(KiesPdf, MatchesCentralDifference) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> lam(0.1, 10.0), beta(0.3, 4.0), tt(0.02, 0.98);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const KiesParams p(lam(gen), beta(gen));
    const double t = tt(gen);
    const double fd = (kies::kies_cdf(p, t + h) - kies::kies_cdf(p, t - h)) / (2 * h);
    EXPECT_NEAR(fd, kies::kies_pdf(p, t), 1e-5);
  }
}

TEST(KiesQuantile, ClosedFormValues) {
  EXPECT_NEAR(kies::kies_quantile(KiesParams(1.0, 1.0), kOneMinusInvE), 0.5, 1e-14);
  EXPECT_NEAR(kies::kies_cdf(KiesParams(2.0, 2.0), kies::kies_quantile(KiesParams(2.0, 2.0), 0.5)),
              0.5, 1e-14);
  EXPECT_LT(kies::kies_quantile(KiesParams(1.0, 1.0), 1e-300), 1e-299);
}

TEST(KiesQuantile, RoundTrip) {
  for (auto [l, b] : {std::pair{1.0, 1.0}, {0.1, 2.0}, {2.0, 0.5}, {30.0, 5.0}, {0.3, 0.7}}) {
    const KiesParams p(l, b);
    for (int i = 1; i <= 99; ++i) {
      const double u = i / 100.0;
      EXPECT_NEAR(kies::kies_cdf(p, kies::kies_quantile(p, u)), u, 1e-10);
    }
  }
}

TEST(KiesQuantile, IllConditionedTailIsUlpAccurate) {
  // lambda = 0.01, beta = 0.3 puts the upper quantiles within 1e-9 of 1, where
  // one ulp of t moves the CDF by more than 1e-10. The returned t must still be
  // within two ulps of the exact inverse.
  const KiesParams p(0.01, 0.3);
  for (int i = 1; i <= 99; ++i) {
    const double u = i / 100.0;
    const double q = kies::kies_quantile(p, u);
    double lo = q, hi = q;
    for (int k = 0; k < 2; ++k) {
      lo = std::nextafter(lo, 0.0);
      hi = std::nextafter(hi, 1.0);
    }
    EXPECT_LE(kies::kies_cdf(p, lo), u + 1e-15) << u;
    EXPECT_GE(kies::kies_cdf(p, hi), u - 1e-15) << u;
  }
}

TEST(ClassifyShape, BetaOneDecreasing) {
  const auto r = kies::classify_shape(KiesParams(2.0, 1.0));
  EXPECT_EQ(r.case_label, ShapeCase::BetaEq1Decreasing);
  EXPECT_EQ(r.left_value, 2.0);
  EXPECT_TRUE(r.critical_points.empty());
}

TEST(ClassifyShape, BetaOnePeak) {
  const auto r = kies::classify_shape(KiesParams(1.0, 1.0));
  EXPECT_EQ(r.case_label, ShapeCase::BetaEq1Peaked);
  ASSERT_EQ(r.critical_points.size(), 1u);
  EXPECT_DOUBLE_EQ(r.critical_points[0], 0.5);
}

TEST(ClassifyShape, BetaAboveOneSingleMax) {
  const auto r = kies::classify_shape(KiesParams(0.1, 2.0));
  EXPECT_EQ(r.case_label, ShapeCase::BetaAbove1);
  EXPECT_EQ(r.left_value, 0.0);
  ASSERT_EQ(r.critical_points.size(), 1u);
  // root of 0.2 (t/(1-t))^2 = 2t + 1, solved independently to full precision
  EXPECT_NEAR(r.critical_points[0], 0.78166077164713973, 1e-11);
  ASSERT_EQ(r.monotone_segments.size(), 2u);
  EXPECT_EQ(r.monotone_segments[0].direction, Direction::Increasing);
  EXPECT_EQ(r.monotone_segments[1].direction, Direction::Decreasing);
}

TEST(ClassifyShape, BetaBelowOneBimodal) {
  // Local min then local max; roots located independently by a fine grid scan of alpha.
  const auto r = kies::classify_shape(KiesParams(0.5, 0.5));
  EXPECT_EQ(r.case_label, ShapeCase::BetaBelow1Bimodal);
  EXPECT_EQ(r.left_value, kInf);
  ASSERT_EQ(r.critical_points.size(), 2u);
  EXPECT_NEAR(r.critical_points[0], 0.33965, 2e-5);
  EXPECT_NEAR(r.critical_points[1], 0.97080, 2e-5);
}

TEST(ClassifyShape, BetaBelowOneDecreasing) {
  const auto r = kies::classify_shape(KiesParams(5.0, 0.5));
  EXPECT_EQ(r.case_label, ShapeCase::BetaBelow1Decreasing);
  EXPECT_TRUE(r.critical_points.empty());
}

class ShapeConsistency : public ::testing::TestWithParam<std::pair<double, double>> {};

// The sign of the numerical PDF derivative on t = 0.001 k agrees with the reported segments.
TEST_P(ShapeConsistency, DerivativeSignsMatchSegments) {
  const auto [lam, beta] = GetParam();
  const KiesParams p(lam, beta);
  const auto r = kies::classify_shape(p);
  for (std::size_t i = 1; i < r.critical_points.size(); ++i)
    ASSERT_LT(r.critical_points[i - 1], r.critical_points[i]);
  for (double c : r.critical_points) {
    ASSERT_GT(c, 0.0);
    ASSERT_LT(c, 1.0);
  }
  const double h = 1e-7;
  for (int k = 1; k < 1000; ++k) {
    const double t = 0.001 * k;
    bool near_critical = false;
    for (double c : r.critical_points) near_critical |= std::abs(t - c) < 2e-3;
    if (near_critical) continue;
    const double d = kies::kies_pdf(p, t + h) - kies::kies_pdf(p, t - h);
    if (std::abs(d) < 1e-12 * std::max(1.0, kies::kies_pdf(p, t))) continue;
    Direction expected = Direction::Decreasing;
    for (const auto& s : r.monotone_segments)
      if (t > s.lo && t < s.hi) expected = s.direction;
    EXPECT_EQ(d > 0 ? Direction::Increasing : Direction::Decreasing, expected)
        << "lambda=" << lam << " beta=" << beta << " t=" << t;
  }
}

INSTANTIATE_TEST_SUITE_P(Params, ShapeConsistency,
                         ::testing::Values(std::pair{0.1, 2.0}, std::pair{1.0, 2.0},
                                           std::pair{5.0, 3.0}, std::pair{1.0, 1.0},
                                           std::pair{2.0, 1.0}, std::pair{0.5, 0.5},
                                           std::pair{0.2, 0.8}, std::pair{5.0, 0.5},
                                           std::pair{0.05, 0.3}, std::pair{1.5, 1.0}));
