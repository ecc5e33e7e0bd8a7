#include "kies/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "kies/kies.hpp"
#include "kies/roots.hpp"
#include "kies/serialization.hpp"

namespace kies {

double mix_quantile(const MixedKies& m, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("mix_quantile: probability outside (0, 1): " + std::to_string(u));
  auto g = [&](double t) { return mix_cdf(m, t) - u; };
  double t = bisect(g, 0.0, 1.0, true, 1e-16, 200);
  const double r = g(t);
  if (r == 0.0 || t <= 0.0 || t >= 1.0) return t;
  const double f = mix_pdf(m, t);
  if (f > 0.0 && std::isfinite(f)) {
    const double polished = t - r / f;
    if (polished > 0.0 && polished < 1.0 && std::abs(g(polished)) < std::abs(r)) t = polished;
  }
  return t;
}

SampleBatch sample(const MixedKies& m, std::uint64_t seed, std::size_t n, unsigned threads) {
  if (n == 0) throw std::invalid_argument("sample: n must be positive");
  SampleBatch batch{std::vector<double>(n), seed, to_json(m).dump()};
  const RandomStream root(seed);

  auto draw_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      RandomStream rng = root.substream(j);
      const LambdaDraw draw = sample_lambda_indexed(m.law(), rng);
      const double beta =
          m.per_component() ? m.beta_at(static_cast<std::size_t>(draw.component)) : m.beta();
      batch.values[j] = kies_quantile(KiesParams(draw.lambda, beta), rng.uniform());
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, (n + 4095) / 4096));
  if (threads <= 1) {
    draw_range(0, n);
    return batch;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(draw_range, lo, hi);
  }
  for (auto& th : pool) th.join();
  return batch;
}

double mc_cdf(const SampleBatch& batch, double t) {
  if (batch.values.empty()) throw std::invalid_argument("mc_cdf: empty batch");
  const auto hits = std::count_if(batch.values.begin(), batch.values.end(),
                                  [t](double v) { return v <= t; });
  return static_cast<double>(hits) / static_cast<double>(batch.values.size());
}

double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf) {
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_critical_99(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace kies
