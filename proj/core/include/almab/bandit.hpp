#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "almab/rng.hpp"

namespace almab {

enum class RewardModel { bernoulli, gaussian };

/// Per-arm running statistics. A value type owned by a single controller;
/// policies read it, only ArmStats::update mutates it.
class ArmStats {
 public:
  explicit ArmStats(int arm_count, RewardModel model = RewardModel::gaussian);

  int arm_count() const { return static_cast<int>(mean_.size()); }
  RewardModel model() const { return model_; }

  double mean(int arm) const { return mean_[check(arm)]; }
  std::int64_t pulls(int arm) const { return pulls_[check(arm)]; }
  std::int64_t total_pulls() const { return total_pulls_; }

  /// Beta posterior counts, Beta(1,1) prior floor (bernoulli mode only).
  double alpha(int arm) const { return alpha_[check(arm)]; }
  double beta(int arm) const { return beta_[check(arm)]; }

  /// Plug-in sample variance with a 0.01 floor (gaussian Thompson).
  double sample_variance(int arm) const;

  /// Incremental mean update: mean += (reward - mean) / (pulls + 1).
  /// In bernoulli mode the reward is binarized into a success with
  /// probability clamp(reward, 0, 1), drawing from `binarize` only when the
  /// clamped value is strictly inside (0, 1).
  void update(int arm, double reward, Rng* binarize = nullptr);

 private:
  std::size_t check(int arm) const;

  std::vector<double> mean_;
  std::vector<double> m2_;  // Welford sum of squared deviations
  std::vector<std::int64_t> pulls_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
  std::int64_t total_pulls_ = 0;
  RewardModel model_;
};

/// UCB1 index selection: argmax mean_i + c * sqrt(log t / n_i). Any unpulled
/// arm is forced first (lowest index). Ties break to the lowest index.
int ucb_select(const ArmStats& stats, std::int64_t t, double c);

/// UCB restricted to a candidate subset (used after active-learning
/// narrowing); forced initialization applies within the subset.
int ucb_select_among(const ArmStats& stats, std::int64_t t, double c,
                     std::span<const int> candidates);

/// Thompson sampling: draw one posterior sample per arm, return the argmax.
/// bernoulli: Beta(alpha_i, beta_i); gaussian: N(mean_i, s2_i / (n_i + 1))
/// with an N(0, 1) prior draw when n_i = 0.
int thompson_select(const ArmStats& stats, Rng& rng, RewardModel model);
int thompson_select_among(const ArmStats& stats, Rng& rng, RewardModel model,
                          std::span<const int> candidates);

/// Choice history priced against the true arm means; mu* is their maximum.
class RegretLedger {
 public:
  explicit RegretLedger(std::vector<double> true_means, double lambda = 0.0);

  /// Append one round: the arms chosen by each agent plus the communication
  /// cost charged during that round.
  void record(std::vector<int> arms, double comm_cost);

  double mu_star() const { return mu_star_; }
  double lambda_weight() const { return lambda_; }
  std::size_t rounds() const { return arms_.size(); }
  const std::vector<int>& round_arms(std::size_t i) const { return arms_[i]; }
  /// mu* minus the mean true value of that round's choices; always >= 0.
  double round_regret(std::size_t i) const;
  double total_comm_cost() const { return total_comm_; }
  const std::vector<double>& true_means() const { return true_means_; }

 private:
  std::vector<double> true_means_;
  std::vector<std::vector<int>> arms_;
  std::vector<double> comm_costs_;
  double total_comm_ = 0.0;
  double mu_star_ = 0.0;
  double lambda_ = 0.0;
};

/// Sum of per-round pseudo-regret (empty ledger -> 0).
double cumulative_regret(const RegretLedger& ledger);

/// Same sum, validating that every round recorded exactly `agents` choices.
double distributed_regret(const RegretLedger& ledger, int agents);

/// distributed_regret plus lambda-weighted total communication cost.
double effective_regret(const RegretLedger& ledger, int agents);

/// Closed-form UCB regret envelope:
/// sum_i [ 8 log T / gap_i + (1 + pi^2/3) gap_i ].
double ucb_regret_bound(std::span<const double> gaps, double horizon);

/// Reporting-only order evaluations with implied constant 1; never asserted.
double ts_regret_order(std::span<const double> gaps, double horizon);
double delayed_regret_order(double horizon, int arms, double max_delay);

}  // namespace almab
