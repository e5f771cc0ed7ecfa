#pragma once

#include <algorithm>
#include <vector>

#include "almab/env.hpp"
#include "almab/errors.hpp"
#include "almab/surrogate.hpp"

namespace almab {

enum class AcquisitionKind {
  expected_improvement,
  variance,
  mutual_information,
  k_center,
};

enum class Direction { minimize, maximize };

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::variance;
  int batch_size = 1;
  Direction direction = Direction::maximize;

  void validate() const;
};

/// Closed-form expected improvement over `best` under N(mean, variance).
/// variance = 0 degenerates to max(improvement, 0). Always >= 0.
double expected_improvement(double mean, double variance, double best,
                            Direction direction);

/// GP-regression mutual information between an observation at x and the
/// latent function: 0.5 * ln(1 + variance / noise_var), in nats.
double mutual_information_score(double variance, double noise_var);

/// Greedy k-center (farthest-point) selection. Returns pool indices in pick
/// order. Ties break to the lowest pool index; with no labeled points the
/// first pick seeds at pool index 0.
std::vector<int> greedy_k_center(const std::vector<Candidate>& pool,
                                 const std::vector<Candidate>& labeled,
                                 int k);

struct ScoredCandidate {
  int pool_index = 0;
  double score = 0.0;
};

namespace detail {

std::vector<Candidate> rows_as_candidates(const Eigen::MatrixXd& rows);

/// Top batch_size by (score desc, index asc); deterministic.
std::vector<ScoredCandidate> rank_top(std::vector<ScoredCandidate> scored,
                                      int batch_size);

}  // namespace detail

/// Score every pool point against the surrogate and return the best
/// batch_size, ties by lowest pool index. Works with GpModel and
/// StandardizedGp (anything exposing predict / train_inputs / train_outputs /
/// noise_variance). The EI incumbent is the plug-in value: the best posterior
/// mean over the training inputs. k_center ignores predictions and treats the
/// training inputs as the labeled set; its scores are the achieved
/// min-distances.
template <typename Model>
std::vector<ScoredCandidate> select_candidates(
    const std::vector<Candidate>& pool, const Model& model,
    const AcquisitionSpec& spec) {
  spec.validate();
  if (pool.empty()) throw InputError("select_candidates: empty pool");
  if (spec.batch_size > static_cast<int>(pool.size())) {
    throw InputError("select_candidates: batch_size exceeds pool size");
  }

  if (spec.kind == AcquisitionKind::k_center) {
    const auto labeled = detail::rows_as_candidates(model.train_inputs());
    const auto picks = greedy_k_center(pool, labeled, spec.batch_size);
    std::vector<ScoredCandidate> out;
    out.reserve(picks.size());
    for (int idx : picks) out.push_back({idx, 0.0});
    return out;
  }

  double incumbent = 0.0;
  if (spec.kind == AcquisitionKind::expected_improvement) {
    const auto train_pred = model.predict_batch(model.train_inputs());
    incumbent = train_pred.front().mean;
    for (const auto& p : train_pred) {
      incumbent = spec.direction == Direction::minimize
                      ? std::min(incumbent, p.mean)
                      : std::max(incumbent, p.mean);
    }
  }

  std::vector<ScoredCandidate> scored;
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const GpPrediction p = model.predict(pool[i].coords);
    double score = 0.0;
    switch (spec.kind) {
      case AcquisitionKind::expected_improvement:
        score = expected_improvement(p.mean, p.variance, incumbent,
                                     spec.direction);
        break;
      case AcquisitionKind::variance:
        score = p.variance;
        break;
      case AcquisitionKind::mutual_information:
        score = mutual_information_score(p.variance, model.noise_variance());
        break;
      case AcquisitionKind::k_center:
        break;  // handled above
    }
    scored.push_back({static_cast<int>(i), score});
  }
  return detail::rank_top(std::move(scored), spec.batch_size);
}

}  // namespace almab
