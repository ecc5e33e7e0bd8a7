#include "kies/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kies/kies.hpp"
#include "kies/special_functions.hpp"

namespace kies {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_closed_unit(double t, const char* what) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error(std::string(what) + ": argument outside [0, 1]: " + std::to_string(t));
}

void require_open_unit(double t, const char* what) {
  if (!(t > 0.0 && t < 1.0))
    throw std::domain_error(std::string(what) + ": argument outside (0, 1): " + std::to_string(t));
}

double log_add(double x, double y) {
  const double hi = std::max(x, y);
  if (hi == -kInf) return -kInf;
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

bool is_exponential_unit_beta(const MixingLaw& law, double beta) {
  if (beta != 1.0) return false;
  if (law.family() == Family::Exponential) return true;
  const auto* af = law.get_if<law::Affine>();
  return af && af->b == 0.0 && af->inner->family() == Family::Exponential;
}

// Shared pieces of the closed forms at a point t in (0, 1).
struct Point {
  double t;
  double beta;
  double log_t;
  double log_1mt;
  double s;             // (t / (1 - t))^beta, possibly +inf
  double log_sprime;    // log of beta t^(beta-1) / (1-t)^(beta+1)

  Point(double t_, double beta_) : t(t_), beta(beta_) {
    log_t = std::log(t);
    log_1mt = std::log1p(-t);
    s = std::exp(beta * (log_t - log_1mt));
    log_sprime = std::log(beta) + (beta - 1.0) * log_t - (beta + 1.0) * log_1mt;
  }

  // log(theta (1-t)^beta + a t^beta)
  double log_rational_den(double theta, double a) const {
    return log_add(std::log(theta) + beta * log_1mt, std::log(a) + beta * log_t);
  }
};

double finish(double log_sprime, double log_rest) {
  if (log_rest == -kInf) return 0.0;
  return std::exp(log_sprime + log_rest);
}

// lambda = a*K + b, K ~ Binomial(n, p):
//   f = s' e^{-bs} q^{n-1} (b q + n p a e^{-as}),  q = 1 - p + p e^{-as}
double pdf_binomial(const Point& pt, int n, double p, double a, double b) {
  if (std::isinf(pt.s)) return 0.0;
  const double e = std::exp(-a * pt.s);
  const double q = 1.0 + p * std::expm1(-a * pt.s);
  const double rest = -b * pt.s + (n - 1) * std::log(q) + std::log(b * q + n * p * a * e);
  return finish(pt.log_sprime, rest);
}

// lambda = a*G + b, G geometric on {1, 2, ...}:
//   f = s' p e^{-(a+b)s} [(a+b) - b(1-p)e^{-as}] / (1 + (p-1)e^{-as})^2
double pdf_geometric(const Point& pt, double p, double a, double b) {
  if (std::isinf(pt.s)) return 0.0;
  const double e = std::exp(-a * pt.s);
  const double rest = std::log(p) - (a + b) * pt.s + std::log((a + b) - b * (1.0 - p) * e) -
                      2.0 * std::log1p((p - 1.0) * e);
  return finish(pt.log_sprime, rest);
}

// lambda = a*X + b, X ~ Gamma(alpha, theta); alpha = 1 is the exponential law.
//   f = theta^alpha beta t^(beta-1) (1-t)^(alpha beta - 1) e^{-bs} [b(theta + a s) + a alpha]
//       / (theta (1-t)^beta + a t^beta)^(alpha+1)
double pdf_gamma(const Point& pt, double alpha, double theta, double a, double b) {
  double bracket_log;
  if (b == 0.0) {
    bracket_log = std::log(a * alpha);
  } else {
    if (std::isinf(pt.s)) return 0.0;
    bracket_log = -b * pt.s + std::log(b * (theta + a * pt.s) + a * alpha);
  }
  const double log_f = alpha * std::log(theta) + std::log(pt.beta) + (pt.beta - 1.0) * pt.log_t +
                       (alpha * pt.beta - 1.0) * pt.log_1mt + bracket_log -
                       (alpha + 1.0) * pt.log_rational_den(theta, a);
  return std::exp(log_f);
}

// lambda = a*X + b, X ~ Beta(alpha, theta):
//   f = s' e^{-bs} [b 1F1(alpha, alpha+theta, -as) + alpha a/(alpha+theta) 1F1(alpha+1, alpha+theta+1, -as)]
double pdf_beta(const Point& pt, double alpha, double theta, double a, double b) {
  if (std::isinf(pt.s)) return 0.0;
  const double x = -a * pt.s;
  double bracket = a * hyp1f1_deriv(alpha, alpha + theta, x);
  if (b != 0.0) bracket += b * hyp1f1(alpha, alpha + theta, x);
  if (!(bracket > 0.0)) return 0.0;
  return finish(pt.log_sprime, -b * pt.s + std::log(bracket));
}

double pdf_fixed(const MixingLaw& law, double beta, double t) {
  const Point pt(t, beta);
  auto kies_at = [&](double lambda) { return kies_pdf(KiesParams(lambda, beta), t); };
  auto table = [&](const law::DiscreteTable& d, double a, double b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.lambdas.size(); ++i)
      acc += d.probs[i] * kies_at(a * d.lambdas[i] + b);
    return acc;
  };
  auto base = [&](const MixingLaw& l, double a, double b) -> double {
    return std::visit(
        overloaded{
            [&](const law::Degenerate& d) { return kies_at(a * d.lambda + b); },
            [&](const law::DiscreteTable& d) { return table(d, a, b); },
            [&](const law::ShiftedBinomial& sb) { return pdf_binomial(pt, sb.n, sb.p, a, a + b); },
            [&](const law::Binomial& bn) { return pdf_binomial(pt, bn.n, bn.p, a, b); },
            [&](const law::Geometric& g) { return pdf_geometric(pt, g.p, a, b); },
            [&](const law::Exponential& e) { return pdf_gamma(pt, 1.0, e.theta, a, b); },
            [&](const law::Gamma& g) { return pdf_gamma(pt, g.alpha, g.theta, a, b); },
            [&](const law::Beta& bt) { return pdf_beta(pt, bt.alpha, bt.theta, a, b); },
            [&](const law::Affine&) -> double {
              throw std::logic_error("mix_pdf: nested affine law");
            },
        },
        l.variant());
  };
  if (const auto* af = law.get_if<law::Affine>()) return base(*af->inner, af->a, af->b);
  return base(law, 1.0, 0.0);
}

double s_of(double t, double beta) { return std::exp(log_odds_power(t, beta)); }

// Per-atom sum over a discrete table with the beta of each atom.
template <class F>
double per_atom_sum(const MixedKies& m, F&& f) {
  const auto& d = *m.law().get_if<law::DiscreteTable>();
  double acc = 0.0;
  for (std::size_t i = 0; i < d.lambdas.size(); ++i)
    acc += d.probs[i] * f(KiesParams(d.lambdas[i], m.beta_at(i)));
  return acc;
}

ValidityReport check(const MixingLaw& law, const BetaSpec& beta, bool with_values) {
  ValidityReport r;
  auto fail = [&](bool& flag, std::string msg) {
    flag = false;
    r.messages.push_back(std::move(msg));
  };
  auto ok_beta = [](double b) { return b > 0.0 && std::isfinite(b); };

  const auto* betas = std::get_if<std::vector<double>>(&beta);
  const auto* table = law.get_if<law::DiscreteTable>();
  if (betas) {
    if (!table)
      fail(r.structure_ok, "per-component beta requires a discrete law");
    else if (betas->size() != table->lambdas.size())
      fail(r.structure_ok, "per-component beta length differs from the number of atoms");
    if (!std::all_of(betas->begin(), betas->end(), ok_beta))
      fail(r.structure_ok, "beta must be positive and finite");
  } else if (!ok_beta(std::get<double>(beta))) {
    fail(r.structure_ok, "beta must be positive and finite");
  }
  if (!r.structure_ok) return r;

  if (!law.positive_support()) fail(r.positive_support, "lambda must be positive almost surely");

  r.mean_lambda = mean(law);
  if (!std::isfinite(r.mean_lambda)) fail(r.mean_ok, "E[lambda] is infinite");

  if (betas) {
    double nm = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < betas->size(); ++i) {
      nm += table->probs[i] * std::pow(table->lambdas[i], -1.0 / (*betas)[i]);
      mb += table->probs[i] * table->lambdas[i] * (*betas)[i];
    }
    r.neg_moment_value = nm;
    r.mean_lambda_beta = mb;
  } else {
    const double b = std::get<double>(beta);
    r.mean_lambda_beta = r.mean_lambda * b;
    r.exponential_unit_beta = is_exponential_unit_beta(law, b);
    if (!r.positive_support || !neg_moment_is_finite(law, b)) {
      r.neg_moment_ok = false;
      r.messages.push_back(r.exponential_unit_beta
                               ? "E[lambda^(-1/beta)] diverges; exponential law with beta = 1 "
                                 "still defines a distribution"
                               : "E[lambda^(-1/beta)] diverges");
    } else if (with_values) {
      r.neg_moment_value = neg_moment(law, b);
    }
  }
  if (!std::isfinite(r.mean_lambda_beta)) fail(r.mean_beta_ok, "E[lambda beta] is infinite");
  return r;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

}  // namespace

ValidityReport validate(const MixingLaw& law, const BetaSpec& beta) {
  return check(law, beta, true);
}

MixedKies::MixedKies(MixingLaw law, double beta) : MixedKies(std::move(law), BetaSpec{beta}) {}

MixedKies::MixedKies(MixingLaw law, std::vector<double> betas)
    : MixedKies(std::move(law), BetaSpec{std::move(betas)}) {}

MixedKies::MixedKies(MixingLaw law, BetaSpec beta) : law_(std::move(law)), beta_(std::move(beta)) {
  const ValidityReport r = check(law_, beta_, false);
  if (!r.valid()) throw InvalidMixture("invalid Kies mixture: " + join(r.messages), r);
  exponential_unit_beta_ = r.exponential_unit_beta;
}

double MixedKies::beta() const {
  if (const auto* b = std::get_if<double>(&beta_)) return *b;
  throw std::logic_error("MixedKies::beta: model has per-component beta");
}

double MixedKies::beta_at(std::size_t i) const {
  if (const auto* b = std::get_if<double>(&beta_)) return *b;
  return std::get<std::vector<double>>(beta_).at(i);
}

ValidityReport validate(const MixedKies& m) { return validate(m.law(), m.beta_spec()); }

double mix_ccdf(const MixedKies& m, double t) {
  require_closed_unit(t, "mix_ccdf");
  if (t == 0.0) return 1.0;
  if (t == 1.0) return 0.0;
  if (m.per_component())
    return per_atom_sum(m, [&](const KiesParams& p) { return kies_ccdf(p, t); });
  if (const auto* d = m.law().get_if<law::Degenerate>())
    return kies_ccdf(KiesParams(d->lambda, m.beta()), t);
  return std::exp(log_mgf(m.law(), -s_of(t, m.beta())));
}

double mix_cdf(const MixedKies& m, double t) {
  require_closed_unit(t, "mix_cdf");
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;
  if (m.per_component())
    return per_atom_sum(m, [&](const KiesParams& p) { return kies_cdf(p, t); });
  if (const auto* d = m.law().get_if<law::Degenerate>())
    return kies_cdf(KiesParams(d->lambda, m.beta()), t);
  if (const auto* d = m.law().get_if<law::DiscreteTable>()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d->lambdas.size(); ++i)
      acc += d->probs[i] * kies_cdf(KiesParams(d->lambdas[i], m.beta()), t);
    return acc;
  }
  return -std::expm1(log_mgf(m.law(), -s_of(t, m.beta())));
}

double mix_pdf(const MixedKies& m, double t) {
  require_open_unit(t, "mix_pdf");
  if (m.per_component())
    return per_atom_sum(m, [&](const KiesParams& p) { return kies_pdf(p, t); });
  return pdf_fixed(m.law(), m.beta(), t);
}

double mix_ccdf_mgf(const MixedKies& m, double t) {
  require_closed_unit(t, "mix_ccdf_mgf");
  if (t == 0.0) return 1.0;
  if (t == 1.0) return 0.0;
  return mgf(m.law(), -s_of(t, m.beta()));
}

double mix_pdf_mgf(const MixedKies& m, double t) {
  require_open_unit(t, "mix_pdf_mgf");
  const Point pt(t, m.beta());
  const double d = mgf_deriv(m.law(), -pt.s);
  if (d == 0.0) return 0.0;
  return std::exp(pt.log_sprime) * d;
}

EndpointValue EndpointValue::infinite() { return {Kind::Infinite, kInf}; }

std::string to_string(const EndpointValue& e) {
  switch (e.kind) {
    case EndpointValue::Kind::Zero: return "0";
    case EndpointValue::Kind::Infinite: return "inf";
    case EndpointValue::Kind::Finite: break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", e.value);
  return buf;
}

EndpointValue left_endpoint(const MixedKies& m) {
  if (!m.per_component()) {
    const double b = m.beta();
    if (b > 1.0) return EndpointValue::zero();
    if (b == 1.0) return EndpointValue::finite(mean(m.law()));
    return EndpointValue::infinite();
  }
  const auto& d = *m.law().get_if<law::DiscreteTable>();
  const auto& betas = std::get<std::vector<double>>(m.beta_spec());
  if (std::any_of(betas.begin(), betas.end(), [](double b) { return b < 1.0; }))
    return EndpointValue::infinite();
  double acc = 0.0;
  bool any_unit = false;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (betas[i] == 1.0) {
      any_unit = true;
      acc += d.probs[i] * d.lambdas[i];
    }
  }
  return any_unit ? EndpointValue::finite(acc) : EndpointValue::zero();
}

EndpointValue right_endpoint(const MixedKies& m) {
  if (!m.exponential_unit_beta()) return EndpointValue::zero();
  if (const auto* e = m.law().get_if<law::Exponential>()) return EndpointValue::finite(e->theta);
  const auto& af = *m.law().get_if<law::Affine>();
  return EndpointValue::finite(af.inner->get_if<law::Exponential>()->theta / af.a);
}

EndpointValue beta_law_right_endpoint(double alpha, double theta, double beta) {
  if (!(alpha > 0.0 && theta > 0.0 && beta > 0.0))
    throw std::invalid_argument("beta_law_right_endpoint: parameters must be positive");
  const double crit = alpha * beta;
  if (crit < 1.0) return EndpointValue::infinite();
  if (crit > 1.0) return EndpointValue::zero();
  return EndpointValue::finite(alpha * beta *
                               std::exp(ln_gamma(alpha + theta) - ln_gamma(theta)));
}

}  // namespace kies
