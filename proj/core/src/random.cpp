#include "kies/random.hpp"

#include <cmath>
#include <numbers>

namespace kies {
namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(seed ^ mix64(stream + kStreamSalt))) {}

RandomStream RandomStream::substream(std::uint64_t index) const noexcept {
  return RandomStream(FromKey{}, mix64(key_ ^ mix64(index * kGoldenGamma + kStreamSalt)));
}

std::uint64_t RandomStream::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGoldenGamma);
}

double RandomStream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::gamma(double shape) noexcept {
  if (shape < 1.0) {
    // X_a = X_{a+1} * U^{1/a}, combined in log space against underflow.
    const double g = gamma(shape + 1.0);
    const double u = uniform();
    return std::exp(std::log(g) + std::log(u) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace kies
