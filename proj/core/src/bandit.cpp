#include "almab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "almab/errors.hpp"

namespace almab {

namespace {
constexpr double kVarianceFloor = 0.01;
}

ArmStats::ArmStats(int arm_count, RewardModel model) : model_(model) {
  if (arm_count < 0) throw InputError("ArmStats: negative arm count");
  const auto n = static_cast<std::size_t>(arm_count);
  mean_.assign(n, 0.0);
  m2_.assign(n, 0.0);
  pulls_.assign(n, 0);
  alpha_.assign(n, 1.0);
  beta_.assign(n, 1.0);
}

std::size_t ArmStats::check(int arm) const {
  if (arm < 0 || arm >= arm_count()) {
    throw InputError("ArmStats: arm index out of range");
  }
  return static_cast<std::size_t>(arm);
}

double ArmStats::sample_variance(int arm) const {
  const std::size_t i = check(arm);
  if (pulls_[i] < 2) return kVarianceFloor;
  const double var = m2_[i] / static_cast<double>(pulls_[i] - 1);
  return std::max(var, kVarianceFloor);
}

void ArmStats::update(int arm, double reward, Rng* binarize) {
  const std::size_t i = check(arm);
  const double delta = reward - mean_[i];
  pulls_[i] += 1;
  total_pulls_ += 1;
  mean_[i] += delta / static_cast<double>(pulls_[i]);
  m2_[i] += delta * (reward - mean_[i]);

  if (model_ == RewardModel::bernoulli) {
    const double p = std::clamp(reward, 0.0, 1.0);
    bool success;
    if (p >= 1.0) {
      success = true;
    } else if (p <= 0.0) {
      success = false;
    } else {
      if (binarize == nullptr) {
        throw InputError("ArmStats: fractional bernoulli update needs an rng");
      }
      success = binarize->uniform() < p;
    }
    if (success) {
      alpha_[i] += 1.0;
    } else {
      beta_[i] += 1.0;
    }
  }
}

namespace {

std::vector<int> all_arms(const ArmStats& stats) {
  std::vector<int> ids(static_cast<std::size_t>(stats.arm_count()));
  for (int i = 0; i < stats.arm_count(); ++i) ids[static_cast<std::size_t>(i)] = i;
  return ids;
}

void check_candidates(const ArmStats& stats, std::span<const int> candidates) {
  if (candidates.empty()) throw InputError("select: empty candidate set");
  for (int c : candidates) {
    if (c < 0 || c >= stats.arm_count()) {
      throw InputError("select: candidate out of range");
    }
  }
}

}  // namespace

int ucb_select_among(const ArmStats& stats, std::int64_t t, double c,
                     std::span<const int> candidates) {
  if (t < 1) throw InputError("ucb_select: round index must be >= 1");
  check_candidates(stats, candidates);

  for (int arm : candidates) {  // forced initialization, lowest index first
    if (stats.pulls(arm) == 0) return arm;
  }
  int best = candidates[0];
  double best_index = -std::numeric_limits<double>::infinity();
  const double log_t = std::log(static_cast<double>(t));
  for (int arm : candidates) {
    const double bonus =
        c * std::sqrt(log_t / static_cast<double>(stats.pulls(arm)));
    const double index = stats.mean(arm) + bonus;
    if (index > best_index) {
      best_index = index;
      best = arm;
    }
  }
  return best;
}

int ucb_select(const ArmStats& stats, std::int64_t t, double c) {
  if (stats.arm_count() == 0) throw InputError("ucb_select: no arms");
  const auto ids = all_arms(stats);
  return ucb_select_among(stats, t, c, ids);
}

int thompson_select_among(const ArmStats& stats, Rng& rng, RewardModel model,
                          std::span<const int> candidates) {
  check_candidates(stats, candidates);
  int best = candidates[0];
  double best_theta = -std::numeric_limits<double>::infinity();
  for (int arm : candidates) {
    double theta;
    if (model == RewardModel::bernoulli) {
      theta = rng.beta(stats.alpha(arm), stats.beta(arm));
    } else if (stats.pulls(arm) == 0) {
      theta = rng.normal();  // N(0, 1) prior
    } else {
      const double sd = std::sqrt(stats.sample_variance(arm) /
                                  static_cast<double>(stats.pulls(arm) + 1));
      theta = stats.mean(arm) + sd * rng.normal();
    }
    if (theta > best_theta) {
      best_theta = theta;
      best = arm;
    }
  }
  return best;
}

int thompson_select(const ArmStats& stats, Rng& rng, RewardModel model) {
  if (stats.arm_count() == 0) throw InputError("thompson_select: no arms");
  const auto ids = all_arms(stats);
  return thompson_select_among(stats, rng, model, ids);
}

RegretLedger::RegretLedger(std::vector<double> true_means, double lambda)
    : true_means_(std::move(true_means)), lambda_(lambda) {
  if (true_means_.empty()) throw InputError("RegretLedger: no arm means");
  if (lambda_ < 0.0) throw InputError("RegretLedger: lambda must be >= 0");
  mu_star_ = *std::max_element(true_means_.begin(), true_means_.end());
}

void RegretLedger::record(std::vector<int> arms, double comm_cost) {
  if (arms.empty()) throw InputError("RegretLedger: round with no choices");
  for (int a : arms) {
    if (a < 0 || a >= static_cast<int>(true_means_.size())) {
      throw InputError("RegretLedger: arm index out of range");
    }
  }
  arms_.push_back(std::move(arms));
  comm_costs_.push_back(comm_cost);
  total_comm_ += comm_cost;
}

double RegretLedger::round_regret(std::size_t i) const {
  const auto& chosen = arms_[i];
  double mean_value = 0.0;
  for (int a : chosen) mean_value += true_means_[static_cast<std::size_t>(a)];
  mean_value /= static_cast<double>(chosen.size());
  return mu_star_ - mean_value;
}

double cumulative_regret(const RegretLedger& ledger) {
  double total = 0.0;
  for (std::size_t i = 0; i < ledger.rounds(); ++i) {
    total += ledger.round_regret(i);
  }
  return total;
}

double distributed_regret(const RegretLedger& ledger, int agents) {
  if (agents < 1) throw InputError("distributed_regret: agents must be >= 1");
  for (std::size_t i = 0; i < ledger.rounds(); ++i) {
    if (static_cast<int>(ledger.round_arms(i).size()) != agents) {
      throw InputError("distributed_regret: ragged round record");
    }
  }
  return cumulative_regret(ledger);
}

double effective_regret(const RegretLedger& ledger, int agents) {
  return distributed_regret(ledger, agents) +
         ledger.lambda_weight() * ledger.total_comm_cost();
}

double ucb_regret_bound(std::span<const double> gaps, double horizon) {
  if (horizon < 2.0) throw InputError("ucb_regret_bound: horizon must be >= 2");
  const double log_t = std::log(horizon);
  double bound = 0.0;
  for (double gap : gaps) {
    if (gap <= 0.0) throw InputError("ucb_regret_bound: gaps must be > 0");
    bound += 8.0 * log_t / gap +
             (1.0 + std::numbers::pi * std::numbers::pi / 3.0) * gap;
  }
  return bound;
}

double ts_regret_order(std::span<const double> gaps, double horizon) {
  if (horizon < 2.0) throw InputError("ts_regret_order: horizon must be >= 2");
  const double log_t = std::log(horizon);
  double order = 0.0;
  for (double gap : gaps) {
    if (gap <= 0.0) throw InputError("ts_regret_order: gaps must be > 0");
    order += log_t / gap;
  }
  return order;
}

double delayed_regret_order(double horizon, int arms, double max_delay) {
  if (horizon < 2.0) {
    throw InputError("delayed_regret_order: horizon must be >= 2");
  }
  if (arms < 1) throw InputError("delayed_regret_order: arms must be >= 1");
  if (max_delay < 0.0) {
    throw InputError("delayed_regret_order: max_delay must be >= 0");
  }
  return std::sqrt((horizon + max_delay) * static_cast<double>(arms) *
                   std::log(horizon));
}

}  // namespace almab
