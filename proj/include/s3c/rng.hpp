#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace s3c {

/// Fixed stream identifiers. A random stream is addressed by
/// (seed, stream, substream); changing the consumer order inside one purpose
/// never perturbs another purpose's stream.
enum class Stream : std::uint64_t {
  Basis = 1,
  Points = 2,
  Masks = 3,
  KMeansInit = 4,
  MonteCarlo = 5,
  EigenStart = 6,
  TestData = 99,
};

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// SplitMix64 generator keyed by (seed, stream, substream).
///
/// The starting state is mix(mix(seed) ^ mix(stream * phi) ^ mix(substream +
/// phi)), after which the standard SplitMix64 recurrence is used:
/// state += 0x9E3779B97F4A7C15, output = mix(state). Uniform doubles take the
/// top 53 bits; normals use Box-Muller with the sine branch cached.
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  Rng(std::uint64_t seed, Stream stream, std::uint64_t substream = 0) noexcept
      : state_(splitmix64_mix(seed) ^
               splitmix64_mix(static_cast<std::uint64_t>(stream) * kGolden) ^
               splitmix64_mix(substream + kGolden)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += kGolden;
    return splitmix64_mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Uses rejection to avoid modulo bias.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % n;
  }

  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace s3c
