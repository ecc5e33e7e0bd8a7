#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "kies/mixture.hpp"

namespace kies {

enum class SaturationMethod { FixedPoint, Algorithm1, ClosedForm };

std::string_view to_string(SaturationMethod m) noexcept;

/// Hausdorff saturation d of a Kies mixture CDF: the unique root of F(d) + d = 1.
struct SaturationResult {
  double x_bar;     ///< root of gamma(x) = 1, equal to d / (1 - d)
  double d;
  double residual;  ///< F(d) + d - 1
  /// tau_i = lambda_i * x_bar^beta_i, one per support point; only for laws with finite support.
  std::optional<std::vector<double>> tau;
  /// E[exp(-tau)], which equals d.
  double expected_exp_neg_tau;
  SaturationMethod method;
};

/// Bisection on l(t) = F(t) + t - 1, which is increasing with l(0) = -1 and l(1) = 1.
SaturationResult saturation_fixed_point(const MixedKies& m);

/// gamma(x) = x (1 / E[exp(-lambda x^beta)] - 1), for x > 0.
double gamma_of_x(const MixedKies& m, double x);

/// Solve gamma(x) = 1 by bracket expansion and bisection, then d = x / (x + 1).
/// The exponential law with beta = 1 falls back to the fixed-point route.
SaturationResult saturation_algorithm1(const MixedKies& m);

/// Exponential law: x_bar = theta^(1/(beta+1)).
SaturationResult saturation_exponential_closed(double theta, double beta);

}  // namespace kies
