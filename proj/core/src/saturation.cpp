#include "kies/saturation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kies/roots.hpp"

namespace kies {
namespace {

constexpr double kRootTol = 1e-15;

// log E[exp(-lambda x^beta)]
double log_laplace(const MixedKies& m, double x) {
  if (!m.per_component()) return log_mgf(m.law(), -std::pow(x, m.beta()));
  const auto& d = *m.law().get_if<law::DiscreteTable>();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(d.lambdas.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = std::log(d.probs[i]) - d.lambdas[i] * std::pow(x, m.beta_at(i));
    hi = std::max(hi, terms[i]);
  }
  double acc = 0.0;
  for (double v : terms) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

std::optional<std::vector<double>> tau_vector(const MixedKies& m, double x_bar) {
  std::vector<double> tau;
  switch (m.law().family()) {
    case Family::Degenerate:
      tau.push_back(m.law().get_if<law::Degenerate>()->lambda * std::pow(x_bar, m.beta()));
      break;
    case Family::DiscreteTable: {
      const auto& d = *m.law().get_if<law::DiscreteTable>();
      for (std::size_t i = 0; i < d.lambdas.size(); ++i)
        tau.push_back(d.lambdas[i] * std::pow(x_bar, m.beta_at(i)));
      break;
    }
    case Family::ShiftedBinomial: {
      const int n = m.law().get_if<law::ShiftedBinomial>()->n;
      const double xb = std::pow(x_bar, m.beta());
      for (int k = 0; k <= n; ++k) tau.push_back((k + 1.0) * xb);
      break;
    }
    default:
      return std::nullopt;
  }
  return tau;
}

double residual(const MixedKies& m, double d) { return mix_cdf(m, d) + d - 1.0; }

}  // namespace

std::string_view to_string(SaturationMethod m) noexcept {
  switch (m) {
    case SaturationMethod::FixedPoint: return "fixed_point";
    case SaturationMethod::Algorithm1: return "algorithm1";
    case SaturationMethod::ClosedForm: return "closed_form";
  }
  return "unknown";
}

SaturationResult saturation_fixed_point(const MixedKies& m) {
  const double d = bisect([&](double t) { return residual(m, t); }, 0.0, 1.0, true, kRootTol);
  const double x_bar = d / (1.0 - d);
  return {x_bar, d, residual(m, d), tau_vector(m, x_bar), mix_ccdf(m, d),
          SaturationMethod::FixedPoint};
}

double gamma_of_x(const MixedKies& m, double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_of_x: x must be positive: " + std::to_string(x));
  return x * std::expm1(-log_laplace(m, x));
}

SaturationResult saturation_algorithm1(const MixedKies& m) {
  if (m.exponential_unit_beta()) return saturation_fixed_point(m);
  auto g = [&](double x) { return x > 0.0 ? gamma_of_x(m, x) : 0.0; };
  const auto root = expand_and_bisect(g, 1.0, kRootTol);
  if (!root) throw std::runtime_error("saturation_algorithm1: no bracket for gamma(x) = 1");
  const double x_bar = *root;
  const double d = x_bar / (x_bar + 1.0);
  return {x_bar, d, residual(m, d), tau_vector(m, x_bar), std::exp(log_laplace(m, x_bar)),
          SaturationMethod::Algorithm1};
}

SaturationResult saturation_exponential_closed(double theta, double beta) {
  if (!(theta > 0.0 && beta > 0.0))
    throw std::invalid_argument("saturation_exponential_closed: parameters must be positive");
  const double x_bar = std::pow(theta, 1.0 / (beta + 1.0));
  const double d = x_bar / (x_bar + 1.0);
  // F(d) = d^beta / (theta (1-d)^beta + d^beta)
  const double u = theta * std::pow(1.0 - d, beta);
  const double v = std::pow(d, beta);
  return {x_bar, d, v / (u + v) + d - 1.0, std::nullopt, u / (u + v),
          SaturationMethod::ClosedForm};
}

}  // namespace kies
