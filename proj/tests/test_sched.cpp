#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "almab/config.hpp"
#include "almab/experiments.hpp"
#include "almab/sched.hpp"
#include "doctest.h"

using namespace almab;

namespace {

MixtureBanditEnv reference_env(double eval_cost_ms = 0.0) {
  return MixtureBanditEnv(ExperimentConfig::reference_mixture().make_spec(),
                          uniform_arm_grid(0.0, 1.0, 15), eval_cost_ms);
}

MixtureBanditEnv noiseless_env() {
  MixtureEnvConfig cfg = ExperimentConfig::reference_mixture();
  cfg.noise_sd = 0.0;
  return MixtureBanditEnv(cfg.make_spec(), uniform_arm_grid(0.0, 1.0, 15));
}

MixtureBanditEnv single_arm_env(double noise_sd) {
  MixtureComponent c;
  c.weight = 1.0;
  c.mean = Eigen::VectorXd::Constant(1, 0.5);
  c.cov = Eigen::MatrixXd::Constant(1, 1, 0.01);
  std::vector<Candidate> arms{{Eigen::VectorXd::Constant(1, 0.5), 0}};
  return MixtureBanditEnv(MixtureSpec({c}, noise_sd), arms);
}

std::vector<int> arm_sequence(const RunHistory& h) {
  std::vector<int> arms;
  for (const auto& r : h.rounds) arms.push_back(r.arm);
  return arms;
}

}  // namespace

TEST_CASE("ucb initialization sweep pulls every arm exactly once") {
  const auto env = reference_env();
  RunConfig cfg;
  cfg.rounds = env.arm_count();
  cfg.seed = 42;
  const RunHistory h = run_sequential(env, cfg);
  for (int a = 0; a < env.arm_count(); ++a) {
    CHECK(h.final_stats.pulls(a) == 1);
  }
  CHECK(h.rounds.size() == 15);
}

TEST_CASE("zero noise with c = 0 exploits the argmax arm after the sweep") {
  const auto env = noiseless_env();
  RunConfig cfg;
  cfg.rounds = 60;
  cfg.ucb_c = 0.0;
  cfg.seed = 7;
  const RunHistory h = run_sequential(env, cfg);
  const int best = env.best_arm();
  for (std::size_t t = 15; t < h.rounds.size(); ++t) {
    REQUIRE(h.rounds[t].arm == best);
  }
}

TEST_CASE("most-pulled arm matches the true argmax in most seeds") {
  const auto env = reference_env();
  const int best = env.best_arm();
  int hits = 0;
  for (int seed = 0; seed < 20; ++seed) {
    RunConfig cfg;
    cfg.rounds = 150;
    cfg.seed = 1000 + static_cast<std::uint64_t>(seed);
    const RunHistory h = run_sequential(env, cfg);
    int most = 0;
    for (int a = 1; a < env.arm_count(); ++a) {
      if (h.final_stats.pulls(a) > h.final_stats.pulls(most)) most = a;
    }
    hits += most == best;
  }
  CHECK(hits >= 15);
}

TEST_CASE("distributed with one agent and no delay collapses to sequential") {
  const auto env = reference_env();
  RunConfig cfg;
  cfg.rounds = 80;
  cfg.seed = 11;
  const RunHistory seq = run_sequential(env, cfg);
  RunConfig dist_cfg = cfg;
  dist_cfg.agents = 1;
  dist_cfg.delay_max = 0;
  const RunHistory dist = run_distributed(env, dist_cfg);
  CHECK(arm_sequence(seq) == arm_sequence(dist));
  for (std::size_t t = 0; t < seq.rounds.size(); ++t) {
    REQUIRE(seq.rounds[t].reward_mean == dist.rounds[t].reward_mean);
  }
}

TEST_CASE("averaged rewards obey the variance-reduction law") {
  const auto env = single_arm_env(0.1);
  for (int agents : {1, 2, 4, 8}) {
    RunConfig cfg;
    cfg.rounds = 10000;
    cfg.agents = agents;
    cfg.seed = 100 + static_cast<std::uint64_t>(agents);
    const RunHistory h = run_distributed(env, cfg);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& r : h.rounds) {
      sum += r.reward_mean;
      sum2 += r.reward_mean * r.reward_mean;
    }
    const double n = static_cast<double>(h.rounds.size());
    const double var = sum2 / n - (sum / n) * (sum / n);
    const double expected = 0.01 / agents;
    REQUIRE(std::abs(var - expected) / expected < 0.15);
  }
}

TEST_CASE("feedback delay is bounded and conservation holds") {
  const auto env = reference_env();
  RunConfig cfg;
  cfg.rounds = 120;
  cfg.agents = 3;
  cfg.delay_max = 3;
  cfg.seed = 21;
  const RunHistory h = run_distributed(env, cfg);
  std::int64_t max_delay = 0;
  for (const auto& r : h.rounds) {
    REQUIRE(r.apply_round >= r.issue_round);
    max_delay = std::max(max_delay, r.apply_round - r.issue_round);
  }
  CHECK(max_delay <= 3);
  CHECK(h.final_stats.total_pulls() == h.applied_updates);
  CHECK(h.applied_updates <= cfg.rounds);

  // at delay 0 every round applies and pulls equal rounds exactly
  cfg.delay_max = 0;
  const RunHistory immediate = run_distributed(env, cfg);
  CHECK(immediate.applied_updates == cfg.rounds);
  CHECK(immediate.final_stats.total_pulls() == cfg.rounds);
}

TEST_CASE("communication cost is exactly agents x applied x unit cost") {
  const auto env = reference_env();
  RunConfig cfg;
  cfg.rounds = 90;
  cfg.agents = 4;
  cfg.delay_max = 2;
  cfg.comm_cost_per_report = 1.5;
  cfg.seed = 33;
  const RunHistory h = run_distributed(env, cfg);
  const double total = h.rounds.back().comm_cost_cum;
  CHECK(total == doctest::Approx(4.0 * 1.5 *
                                 static_cast<double>(h.applied_updates)));
}

TEST_CASE("arm sequences are identical under any worker cap") {
  const auto env = reference_env();
  RunConfig cfg;
  cfg.rounds = 60;
  cfg.agents = 4;
  cfg.delay_max = 2;
  cfg.seed = 5;

  setenv("ALMAB_THREADS", "1", 1);
  const RunHistory serial = run_distributed(env, cfg);
  setenv("ALMAB_THREADS", "4", 1);
  const RunHistory parallel = run_distributed(env, cfg);
  unsetenv("ALMAB_THREADS");
  const RunHistory unbounded = run_distributed(env, cfg);

  CHECK(arm_sequence(serial) == arm_sequence(parallel));
  CHECK(arm_sequence(serial) == arm_sequence(unbounded));
  CHECK(render_run_csv(serial) == render_run_csv(parallel));
  CHECK(render_run_csv(serial) == render_run_csv(unbounded));
}

TEST_CASE("ledger view agrees with the inline regret accounting") {
  const auto env = reference_env();
  RunConfig cfg;
  cfg.rounds = 70;
  cfg.agents = 2;
  cfg.lambda = 0.3;
  cfg.seed = 17;
  const RunHistory h = run_distributed(env, cfg);
  const RegretLedger ledger = make_ledger(h, cfg.lambda);
  CHECK(cumulative_regret(ledger) ==
        doctest::Approx(h.cumulative_pseudo_regret()).epsilon(1e-12));
  CHECK(distributed_regret(ledger, 2) ==
        doctest::Approx(h.cumulative_pseudo_regret()).epsilon(1e-12));
  CHECK(effective_regret(ledger, 2) ==
        doctest::Approx(h.cumulative_pseudo_regret() +
                        0.3 * h.rounds.back().comm_cost_cum));
}

TEST_CASE("wall clock comparison at one agent is a wash") {
  const auto env = reference_env(1.0);
  RunConfig seq;
  seq.rounds = 60;
  seq.seed = 3;
  RunConfig dist = seq;
  dist.agents = 1;
  const WallClockComparison cmp = wall_clock_compare(env, seq, dist);
  CHECK(cmp.speedup_modeled == doctest::Approx(1.0));
  // host-measured ratio is informational and jitters; sanity window only
  CHECK(cmp.speedup_measured > 0.5);
  CHECK(cmp.speedup_measured < 2.0);
  CHECK(cmp.distributed.rounds == 60);
}

TEST_CASE("four concurrent agents at least halve the wall clock") {
  const auto env = reference_env(10.0);
  RunConfig seq;
  seq.rounds = 150;
  seq.seed = 9;
  RunConfig dist = seq;
  dist.agents = 4;
  const WallClockComparison cmp = wall_clock_compare(env, seq, dist);
  CHECK(cmp.distributed.rounds == 38);  // ceil(150 / 4)
  CHECK(cmp.speedup_modeled >= 2.0);
  CHECK(cmp.speedup_measured >= 2.0);
  CHECK(cmp.sequential.evaluations == 150);
  CHECK(cmp.distributed.evaluations == 152);
}

TEST_CASE("distributed regret beats sequential on the shared budget") {
  const auto env = reference_env(0.5);
  int wins = 0;
  for (int seed = 0; seed < 20; ++seed) {
    RunConfig seq;
    seq.rounds = 150;
    seq.seed = 2000 + static_cast<std::uint64_t>(seed);
    RunConfig dist = seq;
    dist.agents = 4;
    const WallClockComparison cmp = wall_clock_compare(env, seq, dist);
    wins += cmp.distributed.pseudo_regret <= cmp.sequential.pseudo_regret;
  }
  CHECK(wins >= 15);
}

TEST_CASE("comparison requires cost emulation and a serial baseline") {
  const auto free_env = reference_env(0.0);
  RunConfig seq;
  RunConfig dist;
  dist.agents = 4;
  CHECK_THROWS_AS((void)wall_clock_compare(free_env, seq, dist), InputError);
  const auto env = reference_env(1.0);
  RunConfig bad_seq;
  bad_seq.agents = 2;
  CHECK_THROWS_AS((void)wall_clock_compare(env, bad_seq, dist), InputError);
}

TEST_CASE("independent agents produce a per-agent choice ledger") {
  const auto env = reference_env();
  RunConfig cfg;
  cfg.rounds = 50;
  cfg.agents = 3;
  cfg.independent_agents = true;
  cfg.policy = PolicyKind::thompson;
  cfg.seed = 77;
  const RunHistory h = run_distributed(env, cfg);
  bool any_disagreement = false;
  for (const auto& r : h.rounds) {
    REQUIRE(r.agent_arms.size() == 3);
    if (r.agent_arms[0] != r.agent_arms[1] ||
        r.agent_arms[1] != r.agent_arms[2]) {
      any_disagreement = true;
    }
  }
  CHECK(any_disagreement);  // local posteriors diverge
  const RegretLedger ledger = make_ledger(h, 0.0);
  CHECK(distributed_regret(ledger, 3) ==
        doctest::Approx(h.cumulative_pseudo_regret()));
  // every agent report lands in the merged statistics
  CHECK(h.final_stats.total_pulls() == 3 * h.applied_updates);
}

TEST_CASE("acquisition narrowing drives the active-query counter") {
  const auto env = reference_env();
  RunConfig cfg;
  cfg.rounds = 40;
  cfg.seed = 13;
  AcquisitionSpec acq;
  acq.kind = AcquisitionKind::variance;
  acq.batch_size = 5;
  acq.direction = Direction::maximize;
  cfg.acquisition = acq;
  const RunHistory h = run_sequential(env, cfg);
  CHECK(h.active_queries > 0);
  CHECK(h.active_queries % 5 == 0);
  CHECK(h.rounds.size() == 40);

  const RunHistory plain = [&] {
    RunConfig c2 = cfg;
    c2.acquisition.reset();
    return run_sequential(env, c2);
  }();
  CHECK(plain.active_queries == 0);
}

TEST_CASE("run config validation") {
  RunConfig cfg;
  cfg.rounds = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.rounds = 10;
  cfg.agents = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.agents = 1;
  cfg.delay_max = -1;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.delay_max = 0;
  const auto env = reference_env();
  cfg.agents = 2;
  CHECK_THROWS_AS((void)run_sequential(env, cfg), InputError);
}
