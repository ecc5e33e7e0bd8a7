#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "kies/mixing_law.hpp"

namespace kies {

/// Either one deterministic power beta shared by every component, or one
/// beta per atom of a DiscreteTable law.
using BetaSpec = std::variant<double, std::vector<double>>;

/// Outcome of checking the integrability conditions a mixing law must meet
/// for the mixture density to be the expected Kies density:
///   (1) E[beta lambda^(-1/beta) ((beta+1)/beta)^((beta+1)/beta)] < inf
///   (2) E[lambda] < inf
///   (3) E[lambda beta] < inf
struct ValidityReport {
  bool structure_ok = true;
  bool positive_support = true;
  bool neg_moment_ok = true;
  bool mean_ok = true;
  bool mean_beta_ok = true;
  /// Exponential lambda with beta = 1: condition (1) fails but the CDF is still
  /// a distribution (it is the family containing the uniform law).
  bool exponential_unit_beta = false;
  std::optional<double> neg_moment_value;
  double mean_lambda = 0.0;
  double mean_lambda_beta = 0.0;
  std::vector<std::string> messages;

  /// Every hard condition passes (the exponential/unit-beta caveat is accepted).
  bool valid() const noexcept {
    return structure_ok && positive_support && (neg_moment_ok || exponential_unit_beta) &&
           mean_ok && mean_beta_ok;
  }
};

/// Full report including numerical values of the moments (may integrate numerically).
ValidityReport validate(const MixingLaw& law, const BetaSpec& beta);

/// Thrown when a (law, beta) pair fails the integrability conditions.
class InvalidMixture : public std::invalid_argument {
 public:
  InvalidMixture(const std::string& what, ValidityReport report)
      : std::invalid_argument(what), report_(std::move(report)) {}
  const ValidityReport& report() const noexcept { return report_; }

 private:
  ValidityReport report_;
};

/// A Kies mixture: F(t) = E[H(t; lambda, beta)].
class MixedKies {
 public:
  /// Throws InvalidMixture when the pair fails validation.
  MixedKies(MixingLaw law, double beta);
  MixedKies(MixingLaw law, std::vector<double> betas);
  MixedKies(MixingLaw law, BetaSpec beta);

  const MixingLaw& law() const noexcept { return law_; }
  const BetaSpec& beta_spec() const noexcept { return beta_; }
  bool per_component() const noexcept { return std::holds_alternative<std::vector<double>>(beta_); }
  /// The shared beta; throws std::logic_error for per-component models.
  double beta() const;
  /// beta of atom i (the shared beta when not per-component).
  double beta_at(std::size_t i) const;

  /// Exponential (or scaled exponential) lambda with beta = 1. The mixture
  /// CDF is valid but its density is not the expected Kies density at t = 1.
  bool exponential_unit_beta() const noexcept { return exponential_unit_beta_; }

 private:
  MixingLaw law_;
  BetaSpec beta_;
  bool exponential_unit_beta_ = false;
};

ValidityReport validate(const MixedKies& m);

double mix_cdf(const MixedKies& m, double t);
double mix_ccdf(const MixedKies& m, double t);
/// Density on (0, 1) from the dedicated closed form of each family.
double mix_pdf(const MixedKies& m, double t);

/// Cross-check route: CCDF as MGF of lambda at -(t/(1-t))^beta and density as
/// s'(t) * MGF'(-s). Fixed-beta models only.
double mix_ccdf_mgf(const MixedKies& m, double t);
double mix_pdf_mgf(const MixedKies& m, double t);

struct EndpointValue {
  enum class Kind { Zero, Finite, Infinite };
  Kind kind;
  double value;

  static EndpointValue zero() { return {Kind::Zero, 0.0}; }
  static EndpointValue finite(double v) { return {Kind::Finite, v}; }
  static EndpointValue infinite();
};

std::string to_string(const EndpointValue& e);

/// Density limit at t -> 0 (zero / finite / infinite by the position of beta w.r.t. 1).
EndpointValue left_endpoint(const MixedKies& m);
/// Density limit at t -> 1: zero, except theta for the exponential/unit-beta family.
EndpointValue right_endpoint(const MixedKies& m);
/// Right-end behaviour of the beta-lambda mixture density for arbitrary beta:
/// infinite when beta < 1/alpha, alpha*beta*Gamma(alpha+theta)/Gamma(theta)
/// when beta = 1/alpha, zero otherwise.
EndpointValue beta_law_right_endpoint(double alpha, double theta, double beta);

}  // namespace kies
