#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tvcpd {

/// Deterministic random stream used by the data generators and permutation
/// tests. The raw 64-bit stream is std::mt19937_64 (Mersenne Twister 19937,
/// 64-bit variant, fully specified by the C++ standard), so the same seed
/// yields the same stream on every platform. Derived values are pinned here
/// rather than delegated to std distributions, whose output is
/// implementation-defined:
///   uniform01:   (x >> 11) * 2^-53                 in [0, 1)
///   uniform01p:  ((x >> 11) + 1) * 2^-53           in (0, 1]
///   normal:      Box-Muller on (uniform01p, uniform01) pairs, second value
///                cached and returned by the next call
///   uniform_int: lo + x % (hi - lo + 1)            (modulo; ranges here are
///                tiny relative to 2^64 so the bias is negligible)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1]; safe as a log() argument.
  double uniform01p() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() %
                                 static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01p();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer; used to derive independent sub-stream seeds (e.g. one
/// per permutation) from a base seed without correlated streams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace tvcpd
