#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kies/mixture.hpp"

namespace kies {

/// Inverse of mix_cdf by bisection on (0, 1), followed by one Newton step when it helps.
double mix_quantile(const MixedKies& m, double u);

struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed;
  std::string law_descriptor;  ///< compact JSON of the model
};

/// Two-stage draw: lambda (and the component beta) from the mixing law, then
/// the Kies quantile of an independent uniform. Draw j uses substream j of the
/// seed, so the batch does not depend on `threads` (0 picks the hardware count).
SampleBatch sample(const MixedKies& m, std::uint64_t seed, std::size_t n, unsigned threads = 0);

/// Fraction of the batch at or below t.
double mc_cdf(const SampleBatch& batch, double t);

/// sup |F_n - F| of a sample against a continuous CDF.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

/// Asymptotic 99% critical value of the one-sample Kolmogorov-Smirnov statistic.
double ks_critical_99(std::size_t n);

}  // namespace kies
