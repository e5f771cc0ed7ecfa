#include "almab/sched.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <deque>
#include <functional>
#include <limits>
#include <thread>

#include "almab/errors.hpp"

namespace almab {

namespace {

// Substream tags; agents get kAgentBase + id so sequential and distributed
// runs share agent 0's reward stream.
constexpr std::uint64_t kAgentBase = 1000;
constexpr std::uint64_t kPolicyBase = 2000;
constexpr std::uint64_t kPolicyStream = 1;
constexpr std::uint64_t kDelayStream = 2;
constexpr std::uint64_t kBinarizeStream = 3;

struct PendingFeedback {
  std::int64_t issue = 0;
  std::int64_t apply = 0;
  std::vector<int> agent_arms;
  std::vector<double> agent_rewards;
  double reward_mean = 0.0;
};

SearchBox arm_bounding_box(const Environment& env) {
  const int d = static_cast<int>(env.arm(0).coords.size());
  SearchBox box;
  box.lower = env.arm(0).coords;
  box.upper = env.arm(0).coords;
  for (int i = 1; i < env.arm_count(); ++i) {
    box.lower = box.lower.cwiseMin(env.arm(i).coords);
    box.upper = box.upper.cwiseMax(env.arm(i).coords);
  }
  // degenerate dims get unit extent so normalization stays finite
  for (int k = 0; k < d; ++k) {
    if (box.upper[k] - box.lower[k] < 1e-12) box.upper[k] = box.lower[k] + 1.0;
  }
  return box;
}

void run_agents(int agents, bool overlap, const std::function<void(int)>& task) {
  const int cap = worker_cap();
  // Threads exist to overlap evaluation cost; they never change results.
  if (agents == 1 || cap <= 1 || !overlap) {
    for (int j = 0; j < agents; ++j) task(j);
    return;
  }
  for (int wave = 0; wave < agents; wave += cap) {
    const int end = std::min(agents, wave + cap);
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(end - wave));
    for (int j = wave; j < end; ++j) {
      threads.emplace_back([&task, j] { task(j); });
    }
    for (auto& th : threads) th.join();
  }
}

int select_arm(const ArmStats& stats, const RunConfig& config, std::int64_t t,
               std::span<const int> candidates, Rng& policy_rng) {
  if (config.policy == PolicyKind::ucb) {
    return ucb_select_among(stats, t, config.ucb_c, candidates);
  }
  return thompson_select_among(stats, policy_rng, config.thompson_model,
                               candidates);
}

RewardModel stats_model(const RunConfig& config) {
  return (config.policy == PolicyKind::thompson &&
          config.thompson_model == RewardModel::bernoulli)
             ? RewardModel::bernoulli
             : RewardModel::gaussian;
}

RunHistory run_engine(const Environment& env, const RunConfig& config) {
  config.validate();
  const int arm_count = env.arm_count();
  if (arm_count < 1) throw InputError("run: environment has no arms");
  const int agents = config.agents;

  const Rng root(config.seed);
  std::vector<Rng> agent_rngs;
  agent_rngs.reserve(static_cast<std::size_t>(agents));
  for (int j = 0; j < agents; ++j) {
    agent_rngs.push_back(root.split(kAgentBase + static_cast<std::uint64_t>(j)));
  }
  Rng controller_policy_rng = root.split(kPolicyStream);
  Rng delay_rng = root.split(kDelayStream);
  Rng binarize_rng = root.split(kBinarizeStream);
  std::vector<Rng> agent_policy_rngs;
  if (config.independent_agents) {
    for (int j = 0; j < agents; ++j) {
      agent_policy_rngs.push_back(
          root.split(kPolicyBase + static_cast<std::uint64_t>(j)));
    }
  }

  ArmStats stats(arm_count, stats_model(config));
  std::vector<ArmStats> local_stats;  // independent-agent mode only
  if (config.independent_agents) {
    local_stats.assign(static_cast<std::size_t>(agents), stats);
  }

  const std::vector<double> true_means = env.true_means();
  const double mu_star = *std::max_element(true_means.begin(), true_means.end());

  std::vector<int> full_pool(static_cast<std::size_t>(arm_count));
  for (int i = 0; i < arm_count; ++i) full_pool[static_cast<std::size_t>(i)] = i;
  std::vector<Candidate> pool;
  SearchBox pool_box;
  if (config.acquisition) {
    pool.reserve(static_cast<std::size_t>(arm_count));
    for (int i = 0; i < arm_count; ++i) pool.push_back(env.arm(i));
    pool_box = arm_bounding_box(env);
  }

  // applied observations feeding the surrogate
  std::vector<Eigen::VectorXd> gp_x;
  std::vector<double> gp_y;

  RunHistory history(stats);
  history.true_means = true_means;
  history.rounds.reserve(static_cast<std::size_t>(config.rounds));

  std::deque<PendingFeedback> pending;
  std::int64_t last_apply = 0;
  double regret_pseudo_cum = 0.0;
  double regret_realized_cum = 0.0;
  double comm_cost_cum = 0.0;
  double wall_ms = 0.0;

  const auto t_start = std::chrono::steady_clock::now();

  for (std::int64_t t = 1; t <= config.rounds; ++t) {
    // active-learning narrowing; needs two applied observations to fit
    std::vector<int> subset = full_pool;
    if (config.acquisition && gp_x.size() >= 2) {
      Eigen::MatrixXd x_data(static_cast<Eigen::Index>(gp_x.size()),
                             gp_x.front().size());
      Eigen::VectorXd y_data(static_cast<Eigen::Index>(gp_y.size()));
      for (std::size_t i = 0; i < gp_x.size(); ++i) {
        x_data.row(static_cast<Eigen::Index>(i)) = gp_x[i];
        y_data[static_cast<Eigen::Index>(i)] = gp_y[i];
      }
      const StandardizedGp model =
          StandardizedGp::fit(x_data, y_data, pool_box, config.surrogate);
      const auto ranked = select_candidates(pool, model, *config.acquisition);
      subset.clear();
      subset.reserve(ranked.size());
      for (const auto& sc : ranked) subset.push_back(sc.pool_index);
      std::sort(subset.begin(), subset.end());
      history.active_queries += static_cast<std::int64_t>(subset.size());
    }

    // selection
    std::vector<int> agent_arms(static_cast<std::size_t>(agents));
    if (config.independent_agents) {
      for (int j = 0; j < agents; ++j) {
        agent_arms[static_cast<std::size_t>(j)] =
            select_arm(local_stats[static_cast<std::size_t>(j)], config, t,
                       subset, agent_policy_rngs[static_cast<std::size_t>(j)]);
      }
    } else {
      const int arm = select_arm(stats, config, t, subset, controller_policy_rng);
      std::fill(agent_arms.begin(), agent_arms.end(), arm);
    }

    // concurrent evaluation; each agent owns its rng, reduction is by agent id
    std::vector<double> rewards(static_cast<std::size_t>(agents));
    run_agents(agents, env.eval_cost_ms() > 0.0, [&](int j) {
      const auto ji = static_cast<std::size_t>(j);
      rewards[ji] = env.evaluate(agent_arms[ji], agent_rngs[ji]);
    });
    double reward_mean = 0.0;
    for (double r : rewards) reward_mean += r;
    reward_mean /= static_cast<double>(agents);
    wall_ms += env.eval_cost_ms();  // per-round makespan, agents concurrent

    // schedule feedback; FIFO application forbids overtaking earlier rounds
    const std::int64_t delta =
        config.delay_max > 0 ? delay_rng.uniform_int(0, config.delay_max) : 0;
    const std::int64_t apply_round = std::max(t + delta, last_apply);
    last_apply = apply_round;
    pending.push_back({t, apply_round, agent_arms, rewards, reward_mean});

    // apply everything due by the end of this round
    double comm_this_round = 0.0;
    while (!pending.empty() && pending.front().apply <= t) {
      const PendingFeedback& fb = pending.front();
      if (config.independent_agents) {
        for (int j = 0; j < agents; ++j) {
          const auto ji = static_cast<std::size_t>(j);
          local_stats[ji].update(fb.agent_arms[ji], fb.agent_rewards[ji],
                                 &binarize_rng);
          stats.update(fb.agent_arms[ji], fb.agent_rewards[ji], &binarize_rng);
        }
      } else {
        stats.update(fb.agent_arms.front(), fb.reward_mean, &binarize_rng);
      }
      history.applied_updates += 1;
      comm_this_round += config.comm_cost_per_report * agents;
      if (config.acquisition) {
        gp_x.push_back(env.arm(fb.agent_arms.front()).coords);
        gp_y.push_back(fb.reward_mean);
      }
      pending.pop_front();
    }
    comm_cost_cum += comm_this_round;

    // ledger row
    double true_value = 0.0;
    for (int a : agent_arms) {
      true_value += true_means[static_cast<std::size_t>(a)];
    }
    true_value /= static_cast<double>(agents);
    const double increment = mu_star - true_value;
    regret_pseudo_cum += increment;
    regret_realized_cum += mu_star - reward_mean;

    RoundRecord rec;
    rec.round = t;
    rec.arm = agent_arms.front();
    rec.agent_arms = std::move(agent_arms);
    rec.agent_rewards = std::move(rewards);
    rec.reward_realized = rec.agent_rewards.front();
    rec.reward_mean = reward_mean;
    rec.regret_increment = increment;
    rec.regret_pseudo_cum = regret_pseudo_cum;
    rec.regret_realized_cum = regret_realized_cum;
    rec.comm_cost_cum = comm_cost_cum;
    rec.issue_round = t;
    rec.apply_round = apply_round;
    rec.wall_ms = wall_ms;
    history.rounds.push_back(std::move(rec));
  }

  history.final_stats = stats;
  history.modeled_wall_ms = wall_ms;
  history.measured_wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return history;
}

}  // namespace

void RunConfig::validate() const {
  if (rounds < 1) throw InputError("RunConfig: rounds must be >= 1");
  if (agents < 1) throw InputError("RunConfig: agents must be >= 1");
  if (delay_max < 0) throw InputError("RunConfig: delay_max must be >= 0");
  if (ucb_c < 0.0) throw InputError("RunConfig: ucb_c must be >= 0");
  if (comm_cost_per_report < 0.0) {
    throw InputError("RunConfig: comm_cost_per_report must be >= 0");
  }
  if (lambda < 0.0) throw InputError("RunConfig: lambda must be >= 0");
  if (acquisition) acquisition->validate();
  surrogate.validate();
}

double RunHistory::cumulative_pseudo_regret() const {
  return rounds.empty() ? 0.0 : rounds.back().regret_pseudo_cum;
}

double RunHistory::mean_realized_reward() const {
  if (rounds.empty()) return 0.0;
  double total = 0.0;
  for (const auto& r : rounds) total += r.reward_mean;
  return total / static_cast<double>(rounds.size());
}

RegretLedger make_ledger(const RunHistory& history, double lambda) {
  RegretLedger ledger(history.true_means, lambda);
  double prev_cum = 0.0;
  for (const auto& rec : history.rounds) {
    ledger.record(rec.agent_arms, rec.comm_cost_cum - prev_cum);
    prev_cum = rec.comm_cost_cum;
  }
  return ledger;
}

RunHistory run_sequential(const Environment& env, const RunConfig& config) {
  if (config.agents != 1) {
    throw InputError("run_sequential: agents must be 1");
  }
  RunConfig serial = config;
  serial.delay_max = 0;  // feedback applies immediately in the serial loop
  return run_engine(env, serial);
}

RunHistory run_distributed(const Environment& env, const RunConfig& config) {
  return run_engine(env, config);
}

WallClockComparison wall_clock_compare(const Environment& env,
                                       const RunConfig& seq_config,
                                       const RunConfig& dist_config) {
  if (env.eval_cost_ms() <= 0.0) {
    throw InputError("wall_clock_compare: evaluation cost emulation required");
  }
  if (seq_config.agents != 1) {
    throw InputError("wall_clock_compare: sequential config must have 1 agent");
  }
  const std::int64_t budget = seq_config.rounds;  // shared evaluation budget
  RunConfig dist = dist_config;
  dist.rounds = (budget + dist.agents - 1) / dist.agents;

  WallClockComparison cmp{ModeMetrics{},
                          ModeMetrics{},
                          1.0,
                          1.0,
                          run_sequential(env, seq_config),
                          run_distributed(env, dist)};

  const auto fill = [](const RunHistory& h, int agents) {
    ModeMetrics m;
    m.rounds = static_cast<std::int64_t>(h.rounds.size());
    m.evaluations = m.rounds * agents;
    m.modeled_wall_ms = h.modeled_wall_ms;
    m.measured_wall_s = h.measured_wall_s;
    m.pseudo_regret = h.cumulative_pseudo_regret();
    m.mean_reward = h.mean_realized_reward();
    return m;
  };
  cmp.sequential = fill(cmp.sequential_history, 1);
  cmp.distributed = fill(cmp.distributed_history, dist.agents);
  if (cmp.distributed.modeled_wall_ms > 0.0) {
    cmp.speedup_modeled =
        cmp.sequential.modeled_wall_ms / cmp.distributed.modeled_wall_ms;
  }
  if (cmp.distributed.measured_wall_s > 0.0) {
    cmp.speedup_measured =
        cmp.sequential.measured_wall_s / cmp.distributed.measured_wall_s;
  }
  return cmp;
}

int worker_cap() {
  if (const char* env = std::getenv("ALMAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  // Uncapped by default: the pool is sized to the agent count. Evaluations
  // model remote cluster nodes (sleep-bound here), so the host core count is
  // not the right ceiling.
  return std::numeric_limits<int>::max();
}

}  // namespace almab
