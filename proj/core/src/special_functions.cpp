#include "kies/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace kies {
namespace {

void check_hyp_domain(double a, double b, double x) {
  if (!(a > 0.0) || !(b > a)) throw std::domain_error("hyp1f1: requires b > a > 0");
  if (!(x <= 0.0)) throw std::domain_error("hyp1f1: requires x <= 0");
}

// e^{-X} * sum_k (c)_k / (b)_k * X^k / k!, with c = b - a and X = -x >= 0.
// Terms are carried already multiplied by e^{-X} so nothing overflows.
std::optional<double> kummer_series(double c, double b, double big_x) {
  constexpr double kRelTol = 1e-16;
  double term = std::exp(-big_x);
  if (term == 0.0) return std::nullopt;
  double sum = term;
  for (int k = 0; k < kHyp1F1TermCap; ++k) {
    term *= (c + k) / (b + k) * big_x / (k + 1.0);
    sum += term;
    // Past the peak the ratio is below one and shrinking: stop once negligible.
    if (k + 1 > big_x && term <= kRelTol * sum) return sum;
  }
  return std::nullopt;
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: requires x > 0");
  return boost::math::lgamma(x);
}

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_fn: requires a, b > 0");
  return std::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

double hyp1f1_asymptotic(double a, double b, double x) {
  check_hyp_domain(a, b, x);
  const double big_x = -x;
  return std::exp(ln_gamma(b) - ln_gamma(b - a) - a * std::log(big_x));
}

double hyp1f1(double a, double b, double x) {
  check_hyp_domain(a, b, x);
  if (x == 0.0) return 1.0;
  const double big_x = -x;
  if (std::isinf(big_x)) return 0.0;
  if (auto s = kummer_series(b - a, b, big_x)) return std::min(*s, 1.0);
  // Only reachable for |x| > kHyp1F1SeriesLimit: the series needs roughly
  // |x| terms to pass its peak.
  return hyp1f1_asymptotic(a, b, x);
}

double hyp1f1_deriv(double a, double b, double x) {
  check_hyp_domain(a, b, x);
  return a / b * hyp1f1(a + 1.0, b + 1.0, x);
}

}  // namespace kies
