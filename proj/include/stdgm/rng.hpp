#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace stdgm {

/// SplitMix64 (Steele, Lea & Flood 2014). The whole sampling chain below is
/// spelled out here instead of relying on <random> distributions, whose
/// algorithms differ between standard libraries.
class SplitMix64 {
 public:
  static constexpr const char* algorithm = "splitmix64";

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }

  /// Box-Muller, one variate per call (the second is discarded for reproducibility).
  double normal() {
    const double u1 = uniform_open0();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Counts arrivals of a unit-rate Poisson process on [0, mean] via exponential
  /// gaps. O(mean) work, exact, and identical on every platform.
  std::uint64_t poisson(double mean) {
    std::uint64_t n = 0;
    double t = -std::log(uniform_open0());
    while (t <= mean) {
      ++n;
      t -= std::log(uniform_open0());
    }
    return n;
  }

  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)); }

  /// Derives an independent stream seed for replicate `stream` of `seed`.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    g.next();
    return g.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace stdgm
