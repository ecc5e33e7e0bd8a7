#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "kies/random.hpp"

namespace kies {

class MixingLaw;

/// Families of the random scale parameter lambda.
namespace law {

struct Degenerate {
  double lambda;
};

/// Finite table of atoms lambda_i with probabilities p_i.
struct DiscreteTable {
  std::vector<double> lambdas;
  std::vector<double> probs;
};

/// lambda = 1 + Binomial(n, p).
struct ShiftedBinomial {
  int n;
  double p;
};

/// lambda = Binomial(n, p), support {0, ..., n}. Has an atom at zero, so it
/// only yields a usable mixture as the inner law of an Affine with b > 0.
struct Binomial {
  int n;
  double p;
};

/// P(lambda = i) = p (1 - p)^(i - 1), i = 1, 2, ...
struct Geometric {
  double p;
};

/// Intensity theta: density theta * exp(-theta x).
struct Exponential {
  double theta;
};

/// Shape alpha, rate theta.
struct Gamma {
  double alpha;
  double theta;
};

/// Beta(alpha, theta) on (0, 1); its MGF is 1F1(alpha; alpha + theta; x).
struct Beta {
  double alpha;
  double theta;
};

/// lambda = a * xi + b with xi drawn from `inner`. Nesting depth is one.
struct Affine {
  double a;
  double b;
  std::shared_ptr<const MixingLaw> inner;
};

}  // namespace law

enum class Family {
  Degenerate,
  DiscreteTable,
  ShiftedBinomial,
  Binomial,
  Geometric,
  Exponential,
  Gamma,
  Beta,
  Affine,
};

std::string_view family_name(Family f) noexcept;
std::optional<Family> family_from_name(std::string_view name) noexcept;

/// Immutable value describing the law of lambda. Construct through the named
/// factories, which validate parameters and throw std::invalid_argument.
class MixingLaw {
 public:
  using Variant = std::variant<law::Degenerate, law::DiscreteTable, law::ShiftedBinomial,
                               law::Binomial, law::Geometric, law::Exponential, law::Gamma,
                               law::Beta, law::Affine>;

  static MixingLaw degenerate(double lambda);
  static MixingLaw discrete(std::vector<double> lambdas, std::vector<double> probs);
  static MixingLaw shifted_binomial(int n, double p);
  static MixingLaw binomial(int n, double p);
  static MixingLaw geometric(double p);
  static MixingLaw exponential(double theta);
  static MixingLaw gamma(double alpha, double theta);
  static MixingLaw beta(double alpha, double theta);
  static MixingLaw affine(double a, double b, MixingLaw inner);

  const Variant& variant() const noexcept { return v_; }
  Family family() const noexcept { return static_cast<Family>(v_.index()); }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&v_);
  }

  /// True when every atom/support point of lambda is strictly positive.
  bool positive_support() const noexcept;

  /// Underlying family after peeling an Affine wrapper.
  Family base_family() const noexcept;

 private:
  explicit MixingLaw(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// E[exp(x * lambda)] for x <= 0. Exactly 1 at x = 0.
double mgf(const MixingLaw& law, double x);
/// log E[exp(x * lambda)], stable far into x -> -infinity.
double log_mgf(const MixingLaw& law, double x);
/// E[lambda * exp(x * lambda)] for x <= 0.
double mgf_deriv(const MixingLaw& law, double x);

/// E[lambda^(-1/beta)], or nullopt when the integral diverges. Affine laws
/// with b > 0 over a continuous family are integrated numerically.
std::optional<double> neg_moment(const MixingLaw& law, double beta);
/// Divergence rule for neg_moment without computing the value.
bool neg_moment_is_finite(const MixingLaw& law, double beta);

double mean(const MixingLaw& law);

/// One draw of lambda.
double sample_lambda(const MixingLaw& law, RandomStream& rng);

/// One draw of lambda together with its atom index (DiscreteTable only; -1 otherwise).
struct LambdaDraw {
  double lambda;
  int component;
};
LambdaDraw sample_lambda_indexed(const MixingLaw& law, RandomStream& rng);

}  // namespace kies
