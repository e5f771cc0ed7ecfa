#pragma once

#include <cstdint>
#include <span>

namespace almab {

struct BootstrapSpec {
  int resamples = 1000;  // B
  double alpha = 0.05;
  std::uint64_t seed = 1;

  void validate() const;
};

enum class Statistic { mean, median };

struct BootstrapCi {
  double point = 0.0;  // mean of the bootstrap statistics
  double lower = 0.0;  // percentile endpoints, nearest-rank rule
  double upper = 0.0;
};

/// Seeded nonparametric bootstrap percentile interval.
BootstrapCi bootstrap_ci(std::span<const double> samples,
                         const BootstrapSpec& spec, Statistic statistic);

struct WilcoxonResult {
  double statistic = 0.0;  // W = min(W+, W-)
  double p_value = 1.0;    // two-sided normal approximation
  int retained = 0;        // pairs left after dropping zero differences
};

/// Paired signed-rank test: zero differences dropped, midranks for ties,
/// normal approximation with tie and continuity corrections. Throws when all
/// differences are zero (test undefined). Requires >= 6 pairs.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x,
                                    std::span<const double> y);

}  // namespace almab
