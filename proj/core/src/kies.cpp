#include "kies/kies.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kies/roots.hpp"

namespace kies {
namespace {

// exp(-x) underflows to zero for x beyond ~745; past this the exponent
// lambda*(t/(1-t))^beta is treated as saturated.
constexpr double kLogSaturation = 6.6;  // log(745) ~= 6.61

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_closed_unit(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error(std::string(what) + ": argument outside [0, 1]: " + std::to_string(t));
}

// log(lambda * (t/(1-t))^beta), for t in (0, 1).
double log_exponent(const KiesParams& p, double t) noexcept {
  return std::log(p.lambda()) + log_odds_power(t, p.beta());
}

}  // namespace

KiesParams::KiesParams(double lambda, double beta) : lambda_(lambda), beta_(beta) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("KiesParams: lambda must be positive and finite");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("KiesParams: beta must be positive and finite");
}

double log_odds_power(double t, double beta) noexcept {
  return beta * (std::log(t) - std::log1p(-t));
}

double kies_cdf(const KiesParams& p, double t) {
  require_closed_unit(t, "kies_cdf");
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;
  const double le = log_exponent(p, t);
  if (le > kLogSaturation) return 1.0;
  return -std::expm1(-std::exp(le));
}

double kies_ccdf(const KiesParams& p, double t) {
  require_closed_unit(t, "kies_ccdf");
  if (t == 0.0) return 1.0;
  if (t == 1.0) return 0.0;
  const double le = log_exponent(p, t);
  if (le > kLogSaturation) return 0.0;
  return std::exp(-std::exp(le));
}

double kies_pdf(const KiesParams& p, double t) {
  if (!(t > 0.0 && t < 1.0))
    throw std::domain_error("kies_pdf: argument outside (0, 1): " + std::to_string(t));
  const double le = log_exponent(p, t);
  if (le > kLogSaturation) return 0.0;
  const double b = p.beta();
  const double log_h = std::log(p.lambda()) + std::log(b) + (b - 1.0) * std::log(t) -
                       (b + 1.0) * std::log1p(-t) - std::exp(le);
  return std::exp(log_h);
}

double kies_pdf_left_limit(const KiesParams& p) noexcept {
  if (p.beta() > 1.0) return 0.0;
  if (p.beta() == 1.0) return p.lambda();
  return kInf;
}

double kies_quantile(const KiesParams& p, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("kies_quantile: probability outside (0, 1): " + std::to_string(u));
  // y = (-log(1-u) / lambda)^(1/beta), t = y / (1 + y)
  const double log_y = (std::log(-std::log1p(-u)) - std::log(p.lambda())) / p.beta();
  double t = 1.0 / (1.0 + std::exp(-log_y));
  t = std::max(t, std::numeric_limits<double>::denorm_min());
  t = std::min(t, std::nextafter(1.0, 0.0));
  return t;
}

std::string_view to_string(ShapeCase c) noexcept {
  switch (c) {
    case ShapeCase::BetaAbove1: return "BetaAbove1";
    case ShapeCase::BetaEq1Decreasing: return "BetaEq1Decreasing";
    case ShapeCase::BetaEq1Peaked: return "BetaEq1Peaked";
    case ShapeCase::BetaBelow1Decreasing: return "BetaBelow1Decreasing";
    case ShapeCase::BetaBelow1Bimodal: return "BetaBelow1Bimodal";
  }
  return "unknown";
}

double shape_alpha(const KiesParams& p, double t) {
  const double b = p.beta();
  return p.lambda() * b * std::exp(log_odds_power(t, b)) - (2.0 * t + b - 1.0);
}

double shape_alpha_prime(const KiesParams& p, double t) {
  const double b = p.beta();
  return p.lambda() * b * b * std::exp((b - 1.0) * std::log(t) - (b + 1.0) * std::log1p(-t)) - 2.0;
}

ShapeReport classify_shape(const KiesParams& p) {
  constexpr double kTol = 1e-12;
  constexpr double kScanStep = 1e-4;
  const double b = p.beta();
  const double lam = p.lambda();
  auto alpha = [&](double t) { return shape_alpha(p, t); };
  auto alpha_prime = [&](double t) { return shape_alpha_prime(p, t); };

  ShapeReport r{};
  r.left_value = kies_pdf_left_limit(p);

  auto peaked = [&](double t2) {
    r.critical_points = {t2};
    r.monotone_segments = {{0.0, t2, Direction::Increasing}, {t2, 1.0, Direction::Decreasing}};
  };
  auto decreasing = [&] {
    r.critical_points.clear();
    r.monotone_segments = {{0.0, 1.0, Direction::Decreasing}};
  };

  if (b > 1.0) {
    // alpha(0+) = 1 - beta < 0, alpha(1-) = +inf: a single crossing.
    r.case_label = ShapeCase::BetaAbove1;
    Bracket found{0.0, 1.0};
    scan_sign_changes(alpha, -1, +1, kScanStep, [&](Bracket br) { found = br; });
    peaked(bisect(alpha, found.lo, found.hi, true, kTol));
    return r;
  }

  if (b == 1.0) {
    if (lam >= 2.0) {
      r.case_label = ShapeCase::BetaEq1Decreasing;
      decreasing();
    } else {
      r.case_label = ShapeCase::BetaEq1Peaked;
      peaked(1.0 - lam / 2.0);
    }
    return r;
  }

  // beta < 1: alpha(0+) = 1 - beta > 0 and alpha' attains its minimum at (1 - beta)/2.
  const double t_bar = (1.0 - b) / 2.0;
  if (alpha_prime(t_bar) >= 0.0) {
    r.case_label = ShapeCase::BetaBelow1Decreasing;
    decreasing();
    return r;
  }
  const double tb1 = bisect(alpha_prime, 0.0, t_bar, false, kTol);
  const double tb2 = bisect(alpha_prime, t_bar, 1.0, true, kTol);
  if (alpha(tb2) >= 0.0) {
    r.case_label = ShapeCase::BetaBelow1Decreasing;
    decreasing();
    return r;
  }
  const double t1 = bisect(alpha, tb1, tb2, false, kTol);
  const double t2 = bisect(alpha, tb2, 1.0, true, kTol);
  r.case_label = ShapeCase::BetaBelow1Bimodal;
  r.critical_points = {t1, t2};
  r.monotone_segments = {{0.0, t1, Direction::Decreasing},
                         {t1, t2, Direction::Increasing},
                         {t2, 1.0, Direction::Decreasing}};
  return r;
}

}  // namespace kies
