#include "almab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "almab/errors.hpp"
#include "almab/rng.hpp"

namespace almab {

namespace {

double compute_statistic(std::vector<double>& values, Statistic statistic) {
  if (statistic == Statistic::mean) {
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(values.size());
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

void BootstrapSpec::validate() const {
  if (resamples < 100) throw InputError("BootstrapSpec: resamples must be >= 100");
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw InputError("BootstrapSpec: alpha must be in (0, 1)");
  }
}

BootstrapCi bootstrap_ci(std::span<const double> samples,
                         const BootstrapSpec& spec, Statistic statistic) {
  spec.validate();
  if (samples.empty()) throw InputError("bootstrap_ci: empty sample");

  const std::size_t n = samples.size();
  Rng rng(spec.seed);
  std::vector<double> stats(static_cast<std::size_t>(spec.resamples));
  std::vector<double> resample(n);
  for (int b = 0; b < spec.resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      resample[i] = samples[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))];
    }
    stats[static_cast<std::size_t>(b)] = compute_statistic(resample, statistic);
  }

  BootstrapCi ci;
  double total = 0.0;
  for (double s : stats) total += s;
  ci.point = total / static_cast<double>(stats.size());

  std::sort(stats.begin(), stats.end());
  const auto nearest_rank = [&](double q) {
    const auto b = static_cast<double>(stats.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * b));
    rank = std::clamp<std::size_t>(rank, 1, stats.size());
    return stats[rank - 1];
  };
  ci.lower = nearest_rank(spec.alpha / 2.0);
  ci.upper = nearest_rank(1.0 - spec.alpha / 2.0);
  return ci;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x,
                                    std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InputError("wilcoxon_signed_rank: unequal lengths");
  }
  if (x.size() < 6) {
    throw InputError(
        "wilcoxon_signed_rank: need >= 6 pairs for the normal approximation");
  }

  std::vector<double> diffs;
  diffs.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) {
    throw InputError("wilcoxon_signed_rank: all differences zero, undefined");
  }
  const std::size_t n = diffs.size();

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(diffs[a]) < std::abs(diffs[b]);
  });

  // midranks plus the tie-group correction term sum(t^3 - t) / 48
  std::vector<double> ranks(n);
  double tie_correction = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n &&
           std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) {
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = midrank;
    const auto t = static_cast<double>(j - i + 1);
    tie_correction += (t * t * t - t) / 48.0;
    i = j + 1;
  }

  double w_plus = 0.0;
  double w_minus = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    (diffs[k] > 0.0 ? w_plus : w_minus) += ranks[k];
  }
  const double w = std::min(w_plus, w_minus);

  const auto nd = static_cast<double>(n);
  const double mu = nd * (nd + 1.0) / 4.0;
  const double sigma2 = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_correction;

  WilcoxonResult result;
  result.statistic = w;
  result.retained = static_cast<int>(n);
  if (sigma2 <= 0.0) {
    result.p_value = 1.0;  // all |d| tied into one group
    return result;
  }
  const double z = std::max(std::abs(w - mu) - 0.5, 0.0) / std::sqrt(sigma2);
  result.p_value = std::clamp(std::erfc(z / std::numbers::sqrt2), 0.0, 1.0);
  return result;
}

}  // namespace almab
