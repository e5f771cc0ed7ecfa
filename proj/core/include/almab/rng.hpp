#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "almab/errors.hpp"

namespace almab {

/// Deterministic random stream with explicit transforms.
///
/// mt19937_64 is fully specified by the standard; the uniform/normal/integer
/// transforms are written out here instead of using std::*_distribution so
/// that a seed pins the exact byte-level draw sequence on every platform.
/// Substreams derived via split() are statistically independent and do not
/// depend on how far the parent stream has advanced, which is what lets one
/// agent per substream run under any thread interleaving.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

  /// Derive an independent substream keyed by `stream` (e.g. an agent id).
  Rng split(std::uint64_t stream) const {
    return Rng(mix(seed_ ^ mix(stream + 0x9E3779B97F4A7C15ull)));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal draw (Box-Muller, cosine branch only).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [lo, hi], inclusive. Consumes nothing when lo == hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw InputError("uniform_int: lo > hi");
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 1) return lo;
    const std::uint64_t reject_above =
        UINT64_MAX - (UINT64_MAX % range + 1) % range;
    std::uint64_t draw = gen_();
    while (draw > reject_above) draw = gen_();
    return lo + static_cast<std::int64_t>(draw % range);
  }

  /// Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang squeeze).
  double gamma(double shape) {
    if (shape < 1.0) throw InputError("gamma: shape must be >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = 1.0 - uniform();  // (0, 1]
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
        return d * v;
      }
    }
  }

  /// Beta(a, b) via two gamma draws; a, b >= 1.
  double beta(double a, double b) {
    const double ga = gamma(a);
    const double gb = gamma(b);
    return ga / (ga + gb);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace almab
