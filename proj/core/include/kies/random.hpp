#pragma once

#include <cstdint>
#include <limits>

namespace kies {

/// Counter-based deterministic random stream.
///
/// Output k of a stream is mix64(key + k * golden_gamma), i.e. SplitMix64
/// evaluated at an explicit counter, so a stream is fully described by
/// (key, counter) and substreams derived by index are independent of the
/// order in which they are consumed.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  /// Independent stream keyed by (this stream's key, index). Does not advance *this.
  RandomStream substream(std::uint64_t index) const noexcept;

  std::uint64_t next_u64() noexcept;
  result_type operator()() noexcept { return next_u64(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  /// Standard normal via Box-Muller (one output per two uniforms).
  double normal() noexcept;
  /// Gamma(shape, rate = 1) by Marsaglia-Tsang, with the U^(1/shape) boost for shape < 1.
  double gamma(double shape) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  struct FromKey {};
  RandomStream(FromKey, std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace kies
