#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kies/mixture.hpp"

namespace kies {

/// Min-max rescaling onto [0, 2/3]: (S - min) / (1.5 (max - min)).
std::vector<double> rescale_minmax(std::span<const double> data);
/// Element-wise division by c; every result must fall inside (0, 1).
std::vector<double> rescale_divide(std::span<const double> data, double c);

struct Histogram {
  int m;
  std::vector<long> counts;
  long n_total;
  std::vector<double> centers;  ///< (i - 0.5) / m
};

/// l_i = m N_i / N at the bin centres.
struct EmpiricalPdf {
  std::vector<double> centers;
  std::vector<double> values;
};

struct BinnedData {
  Histogram histogram;
  EmpiricalPdf pdf;
};

/// m equal bins on [0, 1]; bin i is [(i-1)/m, i/m), the last bin also holds 1.
/// Data must lie in [0, 1] (min-max rescaled data reaches 0 exactly).
BinnedData bin_data(std::span<const double> data, int m);

/// sum_i |ln(l_emp_i + eps) - ln(l_th_i + eps)| with l_th the model density at the centres.
double cost_function(const MixedKies& model, const EmpiricalPdf& emp, double epsilon = 0.01);

/// Model families of the calibration study.
enum class FitFamily { A1, A2, A3, A4, A5, A6, A7, A8 };

std::string_view family_code(FitFamily f) noexcept;  ///< "A1".."A8"
std::string_view family_label(FitFamily f) noexcept; ///< "original", "bimodal", ...
/// Accepts either the code or the label.
std::optional<FitFamily> parse_fit_family(std::string_view s) noexcept;

using ParameterList = std::vector<std::pair<std::string, double>>;

/// Builds the mixture for named parameters:
///   A1 lambda, beta                       A2/A3 lambda_i, beta_i, p_i
///   A4 beta, a, b, p, n  (lambda = a Binomial(n, p) + b)
///   A5 beta, a, b, p     (geometric)      A6 beta, a, b, theta (exponential)
///   A7/A8 beta, a, b, theta, alpha       (gamma / beta law)
MixedKies build_model(FitFamily family, const ParameterList& params);

struct FitConfig {
  FitFamily family = FitFamily::A1;
  double epsilon = 0.01;
  int restarts = 32;
  int max_iterations = 4000;
  std::uint64_t seed = 1;
  int components = 3;  ///< A3 only
  int n_min = 1;       ///< A4 integer search range for n
  int n_max = 2000;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

struct FitResult {
  FitFamily family;
  ParameterList parameters;
  double cost;
  bool converged;
  int evaluations;
  std::vector<double> restart_costs;
  std::optional<MixedKies> model;
};

/// Multi-start Nelder-Mead on transformed parameters (log for positive values,
/// logit for probabilities, softmax for weights). Deterministic for a given seed.
FitResult fit(const EmpiricalPdf& emp, const FitConfig& config);

}  // namespace kies
