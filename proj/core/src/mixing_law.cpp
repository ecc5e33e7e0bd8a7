#include "kies/mixing_law.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kies/special_functions.hpp"

namespace kies {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void require_nonpositive(double x, const char* what) {
  if (!(x <= 0.0)) throw std::domain_error(std::string(what) + ": argument must be <= 0");
}

double binomial_log_pmf(int n, double p, int k) {
  return ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

// sum_k P(xi = k) g(k) for xi ~ Binomial(n, p).
template <class G>
double binomial_expectation(int n, double p, G&& g) {
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) acc += std::exp(binomial_log_pmf(n, p, k)) * g(k);
  return acc;
}

// sum_{i>=1} p (1-p)^(i-1) g(i) for g bounded by one, truncated once the
// remaining tail mass (1-p)^i drops below 1e-17.
template <class G>
double geometric_expectation(double p, G&& g) {
  if (p == 1.0) return g(1.0);
  const double q = 1.0 - p;
  double acc = 0.0;
  double w = p;
  double tail = 1.0;
  for (long i = 1; tail > 1e-17 && i < 100'000'000; ++i) {
    acc += w * g(static_cast<double>(i));
    w *= q;
    tail *= q;
  }
  return acc;
}

double logsumexp_weighted(std::span<const double> lambdas, std::span<const double> probs,
                          double x) {
  double hi = -kInf;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    hi = std::max(hi, std::log(probs[i]) + lambdas[i] * x);
  if (hi == -kInf) return -kInf;
  double acc = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    acc += std::exp(std::log(probs[i]) + lambdas[i] * x - hi);
  return hi + std::log(acc);
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::Degenerate: return "degenerate";
    case Family::DiscreteTable: return "discrete";
    case Family::ShiftedBinomial: return "shifted_binomial";
    case Family::Binomial: return "binomial";
    case Family::Geometric: return "geometric";
    case Family::Exponential: return "exponential";
    case Family::Gamma: return "gamma";
    case Family::Beta: return "beta";
    case Family::Affine: return "affine";
  }
  return "unknown";
}

std::optional<Family> family_from_name(std::string_view name) noexcept {
  static constexpr std::array kAll = {Family::Degenerate,      Family::DiscreteTable,
                                      Family::ShiftedBinomial, Family::Binomial,
                                      Family::Geometric,       Family::Exponential,
                                      Family::Gamma,           Family::Beta,
                                      Family::Affine};
  for (Family f : kAll)
    if (family_name(f) == name) return f;
  return std::nullopt;
}

MixingLaw MixingLaw::degenerate(double lambda) {
  require(positive_finite(lambda), "degenerate law: lambda must be positive");
  return MixingLaw(law::Degenerate{lambda});
}

MixingLaw MixingLaw::discrete(std::vector<double> lambdas, std::vector<double> probs) {
  require(!lambdas.empty(), "discrete law: empty table");
  require(lambdas.size() == probs.size(), "discrete law: lambda/probability length mismatch");
  require(std::all_of(lambdas.begin(), lambdas.end(), positive_finite),
          "discrete law: atoms must be positive");
  require(std::all_of(probs.begin(), probs.end(), positive_finite),
          "discrete law: probabilities must be positive");
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  require(std::abs(total - 1.0) <= 1e-12, "discrete law: probabilities must sum to one");
  return MixingLaw(law::DiscreteTable{std::move(lambdas), std::move(probs)});
}

MixingLaw MixingLaw::shifted_binomial(int n, double p) {
  require(n >= 1, "shifted binomial law: n must be a positive integer");
  require(p > 0.0 && p < 1.0, "shifted binomial law: p must lie in (0, 1)");
  return MixingLaw(law::ShiftedBinomial{n, p});
}

MixingLaw MixingLaw::binomial(int n, double p) {
  require(n >= 1, "binomial law: n must be a positive integer");
  require(p > 0.0 && p < 1.0, "binomial law: p must lie in (0, 1)");
  return MixingLaw(law::Binomial{n, p});
}

MixingLaw MixingLaw::geometric(double p) {
  require(p > 0.0 && p <= 1.0, "geometric law: p must lie in (0, 1]");
  return MixingLaw(law::Geometric{p});
}

MixingLaw MixingLaw::exponential(double theta) {
  require(positive_finite(theta), "exponential law: theta must be positive");
  return MixingLaw(law::Exponential{theta});
}

MixingLaw MixingLaw::gamma(double alpha, double theta) {
  require(positive_finite(alpha), "gamma law: alpha must be positive");
  require(positive_finite(theta), "gamma law: theta must be positive");
  return MixingLaw(law::Gamma{alpha, theta});
}

MixingLaw MixingLaw::beta(double alpha, double theta) {
  require(positive_finite(alpha), "beta law: alpha must be positive");
  require(positive_finite(theta), "beta law: theta must be positive");
  return MixingLaw(law::Beta{alpha, theta});
}

MixingLaw MixingLaw::affine(double a, double b, MixingLaw inner) {
  require(positive_finite(a), "affine law: a must be positive");
  require(b >= 0.0 && std::isfinite(b), "affine law: b must be non-negative");
  require(inner.family() != Family::Affine, "affine law: an affine law may not wrap another");
  return MixingLaw(law::Affine{a, b, std::make_shared<const MixingLaw>(std::move(inner))});
}

bool MixingLaw::positive_support() const noexcept {
  if (const auto* af = get_if<law::Affine>()) return af->b > 0.0 || af->inner->positive_support();
  return family() != Family::Binomial;
}

Family MixingLaw::base_family() const noexcept {
  if (const auto* af = get_if<law::Affine>()) return af->inner->family();
  return family();
}

double mgf(const MixingLaw& law, double x) {
  require_nonpositive(x, "mgf");
  if (x == 0.0) return 1.0;
  return std::visit(
      overloaded{
          [&](const law::Degenerate& d) { return std::exp(d.lambda * x); },
          [&](const law::DiscreteTable& d) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d.lambdas.size(); ++i)
              acc += d.probs[i] * std::exp(d.lambdas[i] * x);
            return acc;
          },
          [&](const law::ShiftedBinomial& b) {
            return std::exp(x) * std::pow(1.0 - b.p + b.p * std::exp(x), b.n);
          },
          [&](const law::Binomial& b) { return std::pow(1.0 - b.p + b.p * std::exp(x), b.n); },
          [&](const law::Geometric& g) {
            const double ex = std::exp(x);
            return g.p * ex / (1.0 - (1.0 - g.p) * ex);
          },
          [&](const law::Exponential& e) { return e.theta / (e.theta - x); },
          [&](const law::Gamma& g) { return std::pow(g.theta / (g.theta - x), g.alpha); },
          [&](const law::Beta& b) { return hyp1f1(b.alpha, b.alpha + b.theta, x); },
          [&](const law::Affine& af) {
            const double shift = af.b == 0.0 ? 1.0 : std::exp(af.b * x);
            return shift * mgf(*af.inner, af.a * x);
          },
      },
      law.variant());
}

double log_mgf(const MixingLaw& law, double x) {
  require_nonpositive(x, "log_mgf");
  if (x == 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const law::Degenerate& d) { return d.lambda * x; },
          [&](const law::DiscreteTable& d) {
            return logsumexp_weighted(d.lambdas, d.probs, x);
          },
          [&](const law::ShiftedBinomial& b) {
            return x + b.n * std::log1p(b.p * std::expm1(x));
          },
          [&](const law::Binomial& b) { return b.n * std::log1p(b.p * std::expm1(x)); },
          [&](const law::Geometric& g) {
            return std::log(g.p) + x - std::log1p(-(1.0 - g.p) * std::exp(x));
          },
          [&](const law::Exponential& e) { return -std::log1p(-x / e.theta); },
          [&](const law::Gamma& g) { return -g.alpha * std::log1p(-x / g.theta); },
          [&](const law::Beta& b) { return std::log(hyp1f1(b.alpha, b.alpha + b.theta, x)); },
          [&](const law::Affine& af) {
            const double shift = af.b == 0.0 ? 0.0 : af.b * x;
            return shift + log_mgf(*af.inner, af.a * x);
          },
      },
      law.variant());
}

double mgf_deriv(const MixingLaw& law, double x) {
  require_nonpositive(x, "mgf_deriv");
  return std::visit(
      overloaded{
          [&](const law::Degenerate& d) { return d.lambda * std::exp(d.lambda * x); },
          [&](const law::DiscreteTable& d) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d.lambdas.size(); ++i)
              acc += d.probs[i] * d.lambdas[i] * std::exp(d.lambdas[i] * x);
            return acc;
          },
          [&](const law::ShiftedBinomial& b) {
            const double ex = std::exp(x);
            const double q = 1.0 - b.p + b.p * ex;
            return ex * std::pow(q, b.n - 1) * (q + b.n * b.p * ex);
          },
          [&](const law::Binomial& b) {
            const double ex = std::exp(x);
            return b.n * b.p * ex * std::pow(1.0 - b.p + b.p * ex, b.n - 1);
          },
          [&](const law::Geometric& g) {
            const double ex = std::exp(x);
            const double den = 1.0 - (1.0 - g.p) * ex;
            return g.p * ex / (den * den);
          },
          [&](const law::Exponential& e) {
            const double den = e.theta - x;
            return e.theta / (den * den);
          },
          [&](const law::Gamma& g) {
            return g.alpha / (g.theta - x) * std::pow(g.theta / (g.theta - x), g.alpha);
          },
          [&](const law::Beta& b) { return hyp1f1_deriv(b.alpha, b.alpha + b.theta, x); },
          [&](const law::Affine& af) {
            const double shift = af.b == 0.0 ? 1.0 : std::exp(af.b * x);
            const double ax = af.a * x;
            return shift * (af.b * mgf(*af.inner, ax) + af.a * mgf_deriv(*af.inner, ax));
          },
      },
      law.variant());
}

bool neg_moment_is_finite(const MixingLaw& law, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("neg_moment_is_finite: beta must be positive");
  switch (law.family()) {
    case Family::Binomial: return false;
    case Family::Exponential: return beta > 1.0;
    case Family::Gamma: return beta * law.get_if<law::Gamma>()->alpha > 1.0;
    case Family::Beta: return beta * law.get_if<law::Beta>()->alpha > 1.0;
    case Family::Affine: {
      const auto& af = *law.get_if<law::Affine>();
      return af.b > 0.0 || neg_moment_is_finite(*af.inner, beta);
    }
    default: return true;
  }
}

std::optional<double> neg_moment(const MixingLaw& law, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("neg_moment: beta must be positive");
  const double r = 1.0 / beta;
  auto pw = [r](double v) { return std::pow(v, -r); };
  return std::visit(
      overloaded{
          [&](const law::Degenerate& d) -> std::optional<double> { return pw(d.lambda); },
          [&](const law::DiscreteTable& d) -> std::optional<double> {
            double acc = 0.0;
            for (std::size_t i = 0; i < d.lambdas.size(); ++i) acc += d.probs[i] * pw(d.lambdas[i]);
            return acc;
          },
          [&](const law::ShiftedBinomial& b) -> std::optional<double> {
            return binomial_expectation(b.n, b.p, [&](int k) { return pw(k + 1.0); });
          },
          [&](const law::Binomial&) -> std::optional<double> { return std::nullopt; },
          [&](const law::Geometric& g) -> std::optional<double> {
            return geometric_expectation(g.p, pw);
          },
          [&](const law::Exponential& e) -> std::optional<double> {
            if (!(beta > 1.0)) return std::nullopt;
            return std::pow(e.theta, r) * std::tgamma(1.0 - r);
          },
          [&](const law::Gamma& g) -> std::optional<double> {
            if (!(beta * g.alpha > 1.0)) return std::nullopt;
            return std::pow(g.theta, r) * std::exp(ln_gamma(g.alpha - r) - ln_gamma(g.alpha));
          },
          [&](const law::Beta& b) -> std::optional<double> {
            if (!(beta * b.alpha > 1.0)) return std::nullopt;
            return std::exp(ln_gamma(b.alpha - r) + ln_gamma(b.alpha + b.theta) -
                            ln_gamma(b.alpha) - ln_gamma(b.alpha + b.theta - r));
          },
          [&](const law::Affine& af) -> std::optional<double> {
            const MixingLaw& inner = *af.inner;
            if (af.b == 0.0) {
              auto m = neg_moment(inner, beta);
              if (!m) return std::nullopt;
              return std::pow(af.a, -r) * *m;
            }
            auto g = [&](double xi) { return pw(af.a * xi + af.b); };
            using boost::math::quadrature::exp_sinh;
            using boost::math::quadrature::tanh_sinh;
            switch (inner.family()) {
              case Family::Exponential: {
                const double th = inner.get_if<law::Exponential>()->theta;
                exp_sinh<double> integrator;
                return integrator.integrate(
                    [&](double x) { return g(x) * th * std::exp(-th * x); }, 0.0, kInf);
              }
              case Family::Gamma: {
                const auto& gm = *inner.get_if<law::Gamma>();
                const double log_norm = gm.alpha * std::log(gm.theta) - ln_gamma(gm.alpha);
                exp_sinh<double> integrator;
                return integrator.integrate(
                    [&](double x) {
                      if (x <= 0.0) return 0.0;
                      return g(x) * std::exp(log_norm + (gm.alpha - 1.0) * std::log(x) -
                                             gm.theta * x);
                    },
                    0.0, kInf);
              }
              case Family::Beta: {
                const auto& bt = *inner.get_if<law::Beta>();
                const double log_norm = -std::log(beta_fn(bt.alpha, bt.theta));
                tanh_sinh<double> integrator;
                return integrator.integrate(
                    [&](double x) {
                      if (x <= 0.0 || x >= 1.0) return 0.0;
                      return g(x) * std::exp(log_norm + (bt.alpha - 1.0) * std::log(x) +
                                             (bt.theta - 1.0) * std::log1p(-x));
                    },
                    0.0, 1.0);
              }
              case Family::Degenerate:
                return g(inner.get_if<law::Degenerate>()->lambda);
              case Family::DiscreteTable: {
                const auto& d = *inner.get_if<law::DiscreteTable>();
                double acc = 0.0;
                for (std::size_t i = 0; i < d.lambdas.size(); ++i) acc += d.probs[i] * g(d.lambdas[i]);
                return acc;
              }
              case Family::ShiftedBinomial: {
                const auto& b = *inner.get_if<law::ShiftedBinomial>();
                return binomial_expectation(b.n, b.p, [&](int k) { return g(k + 1.0); });
              }
              case Family::Binomial: {
                const auto& b = *inner.get_if<law::Binomial>();
                return binomial_expectation(b.n, b.p, [&](int k) { return g(double(k)); });
              }
              case Family::Geometric:
                return geometric_expectation(inner.get_if<law::Geometric>()->p,
                                             [&](double i) { return g(i) / g(1.0); }) *
                       g(1.0);
              case Family::Affine:
                break;
            }
            throw std::logic_error("neg_moment: nested affine law");
          },
      },
      law.variant());
}

double mean(const MixingLaw& law) {
  return std::visit(
      overloaded{
          [](const law::Degenerate& d) { return d.lambda; },
          [](const law::DiscreteTable& d) {
            return std::inner_product(d.lambdas.begin(), d.lambdas.end(), d.probs.begin(), 0.0);
          },
          [](const law::ShiftedBinomial& b) { return 1.0 + b.n * b.p; },
          [](const law::Binomial& b) { return b.n * b.p; },
          [](const law::Geometric& g) { return 1.0 / g.p; },
          [](const law::Exponential& e) { return 1.0 / e.theta; },
          [](const law::Gamma& g) { return g.alpha / g.theta; },
          [](const law::Beta& b) { return b.alpha / (b.alpha + b.theta); },
          [](const law::Affine& af) { return af.a * mean(*af.inner) + af.b; },
      },
      law.variant());
}

LambdaDraw sample_lambda_indexed(const MixingLaw& law, RandomStream& rng) {
  auto bernoulli_count = [&](int n, double p) {
    int k = 0;
    for (int i = 0; i < n; ++i) k += rng.uniform() < p;
    return k;
  };
  return std::visit(
      overloaded{
          [&](const law::Degenerate& d) { return LambdaDraw{d.lambda, -1}; },
          [&](const law::DiscreteTable& d) {
            const double u = rng.uniform();
            double acc = 0.0;
            const int last = static_cast<int>(d.lambdas.size()) - 1;
            for (int i = 0; i < last; ++i) {
              acc += d.probs[i];
              if (u < acc) return LambdaDraw{d.lambdas[i], i};
            }
            return LambdaDraw{d.lambdas[last], last};
          },
          [&](const law::ShiftedBinomial& b) {
            return LambdaDraw{1.0 + bernoulli_count(b.n, b.p), -1};
          },
          [&](const law::Binomial& b) {
            return LambdaDraw{static_cast<double>(bernoulli_count(b.n, b.p)), -1};
          },
          [&](const law::Geometric& g) {
            if (g.p == 1.0) return LambdaDraw{1.0, -1};
            return LambdaDraw{1.0 + std::floor(std::log(rng.uniform()) / std::log1p(-g.p)), -1};
          },
          [&](const law::Exponential& e) {
            return LambdaDraw{-std::log(rng.uniform()) / e.theta, -1};
          },
          [&](const law::Gamma& g) { return LambdaDraw{rng.gamma(g.alpha) / g.theta, -1}; },
          [&](const law::Beta& b) {
            const double x = rng.gamma(b.alpha);
            const double y = rng.gamma(b.theta);
            return LambdaDraw{x / (x + y), -1};
          },
          [&](const law::Affine& af) {
            const LambdaDraw inner = sample_lambda_indexed(*af.inner, rng);
            return LambdaDraw{af.a * inner.lambda + af.b, inner.component};
          },
      },
      law.variant());
}

double sample_lambda(const MixingLaw& law, RandomStream& rng) {
  return sample_lambda_indexed(law, rng).lambda;
}

}  // namespace kies
