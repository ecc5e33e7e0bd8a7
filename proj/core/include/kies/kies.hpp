#pragma once

#include <limits>
#include <string_view>
#include <vector>

namespace kies {

/// Parameters of the base Kies distribution on (0, 1):
///   H(t) = 1 - exp(-lambda * (t / (1 - t))^beta).
/// Both parameters must be strictly positive and finite.
class KiesParams {
 public:
  KiesParams(double lambda, double beta);

  double lambda() const noexcept { return lambda_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const KiesParams&, const KiesParams&) = default;

 private:
  double lambda_;
  double beta_;
};

double kies_cdf(const KiesParams& p, double t);
double kies_ccdf(const KiesParams& p, double t);

/// Density on the open interval; throws std::domain_error at t <= 0 or t >= 1.
/// Use kies_pdf_left_limit / kies_pdf_right_limit for the endpoints.
double kies_pdf(const KiesParams& p, double t);
double kies_pdf_left_limit(const KiesParams& p) noexcept;
constexpr double kies_pdf_right_limit(const KiesParams&) noexcept { return 0.0; }

double kies_quantile(const KiesParams& p, double u);

/// log of (t / (1 - t))^beta, evaluated without forming the ratio.
double log_odds_power(double t, double beta) noexcept;

enum class ShapeCase {
  BetaAbove1,
  BetaEq1Decreasing,
  BetaEq1Peaked,
  BetaBelow1Decreasing,
  BetaBelow1Bimodal,
};

std::string_view to_string(ShapeCase c) noexcept;

enum class Direction { Increasing, Decreasing };

struct MonotoneSegment {
  double lo;
  double hi;
  Direction direction;
};

struct ShapeReport {
  ShapeCase case_label;
  /// PDF limit at t -> 0: 0, lambda, or +infinity.
  double left_value;
  /// Interior extrema of the PDF, strictly increasing inside (0, 1).
  std::vector<double> critical_points;
  std::vector<MonotoneSegment> monotone_segments;
};

/// Sign analysis of alpha(t) = lambda*beta*(t/(1-t))^beta - (2t + beta - 1);
/// the PDF increases exactly where alpha < 0.
double shape_alpha(const KiesParams& p, double t);
double shape_alpha_prime(const KiesParams& p, double t);

ShapeReport classify_shape(const KiesParams& p);

}  // namespace kies
