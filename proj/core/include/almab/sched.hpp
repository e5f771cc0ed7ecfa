#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "almab/acquisition.hpp"
#include "almab/bandit.hpp"
#include "almab/env.hpp"
#include "almab/surrogate.hpp"

namespace almab {

enum class PolicyKind { ucb, thompson };

struct RunConfig {
  std::int64_t rounds = 100;  // T
  int agents = 1;             // N
  PolicyKind policy = PolicyKind::ucb;
  double ucb_c = 1.4142135623730951;  // sqrt(2), the "2 log t" form
  RewardModel thompson_model = RewardModel::gaussian;
  /// When set, an active-learning stage narrows the arm pool each round
  /// before the bandit policy picks.
  std::optional<AcquisitionSpec> acquisition;
  GpHyperparams surrogate;
  std::int64_t delay_max = 0;  // bounded feedback delay, rounds
  double comm_cost_per_report = 1.0;
  double lambda = 0.0;
  /// §-style per-agent choice model: each agent selects on its own local
  /// statistics instead of replicating the controller choice.
  bool independent_agents = false;
  std::uint64_t seed = 1;

  void validate() const;
};

struct RoundRecord {
  std::int64_t round = 0;  // 1-based
  int arm = 0;             // controller choice (agent 0's in independent mode)
  std::vector<int> agent_arms;
  std::vector<double> agent_rewards;
  double reward_realized = 0.0;  // agent 0's raw draw
  double reward_mean = 0.0;      // mean over agents, the update value
  double regret_increment = 0.0;
  double regret_pseudo_cum = 0.0;
  double regret_realized_cum = 0.0;
  double comm_cost_cum = 0.0;
  std::int64_t issue_round = 0;
  std::int64_t apply_round = 0;  // actual application round (may exceed T)
  double wall_ms = 0.0;          // modeled cumulative evaluation time
};

struct RunHistory {
  explicit RunHistory(ArmStats stats) : final_stats(std::move(stats)) {}

  std::vector<RoundRecord> rounds;
  ArmStats final_stats;
  std::vector<double> true_means;
  std::int64_t active_queries = 0;  // q_T
  std::int64_t applied_updates = 0;
  double modeled_wall_ms = 0.0;
  double measured_wall_s = 0.0;

  double cumulative_pseudo_regret() const;
  double mean_realized_reward() const;
};

/// Ledger view of a run history (one entry per round) for the regret
/// operations; lambda defaults to the run's weight.
RegretLedger make_ledger(const RunHistory& history, double lambda);

/// Single-agent serial loop: select, evaluate once, update, append.
/// Requires agents == 1; feedback applies immediately.
RunHistory run_sequential(const Environment& env, const RunConfig& config);

/// Distributed loop: each round all N agents evaluate the controller's arm
/// concurrently (replication), rewards reduce in agent-id order to r_bar, and
/// one mean update is scheduled with a bounded uniform delay. Worker
/// parallelism is capped by ALMAB_THREADS and never affects the arm sequence.
RunHistory run_distributed(const Environment& env, const RunConfig& config);

struct ModeMetrics {
  std::int64_t rounds = 0;
  std::int64_t evaluations = 0;
  double modeled_wall_ms = 0.0;
  double measured_wall_s = 0.0;
  double pseudo_regret = 0.0;
  double mean_reward = 0.0;
};

struct WallClockComparison {
  ModeMetrics sequential;
  ModeMetrics distributed;
  double speedup_modeled = 1.0;   // modeled seq time / modeled dist time
  double speedup_measured = 1.0;  // host-measured ratio, informational
  RunHistory sequential_history;
  RunHistory distributed_history;
};

/// Equal-evaluation-budget comparison: T is the shared evaluation budget.
/// The sequential config spends it one evaluation per round; the distributed
/// config is re-scoped to ceil(T / N) rounds of N concurrent evaluations.
/// Requires cost emulation (env.eval_cost_ms() > 0) so the timing model is
/// grounded.
WallClockComparison wall_clock_compare(const Environment& env,
                                       const RunConfig& seq_config,
                                       const RunConfig& dist_config);

/// Worker concurrency cap: ALMAB_THREADS when set, else hardware threads.
int worker_cap();

}  // namespace almab
