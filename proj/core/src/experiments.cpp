#include "almab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "CLI11.hpp"
#include "almab/csv.hpp"
#include "almab/errors.hpp"
#include "almab/scaling.hpp"
#include "almab/stats.hpp"
#include "almab/svg.hpp"

namespace almab {

namespace {

constexpr const char* kColorBlue = "#1f78b4";
constexpr const char* kColorLightBlue = "#a6cee3";
constexpr const char* kColorOrange = "#ff7f00";
constexpr const char* kColorGreen = "#33a02c";
constexpr const char* kColorRed = "#e31a1c";
constexpr const char* kColorPurple = "#6a3d9a";

std::vector<double> column_of(const std::vector<RoundRecord>& rounds,
                              double RoundRecord::* field) {
  std::vector<double> out;
  out.reserve(rounds.size());
  for (const auto& r : rounds) out.push_back(r.*field);
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RunHistory execute_run(const Environment& env, const NamedRunConfig& named,
                       std::uint64_t seed) {
  RunConfig cfg = named.run;
  cfg.seed = seed;
  return named.distributed ? run_distributed(env, cfg)
                           : run_sequential(env, cfg);
}

struct RunSummary {
  std::string run;
  int replicate = 0;
  std::int64_t rounds = 0;
  double final_pseudo_regret = 0.0;
  double final_realized_regret = 0.0;
  double mean_reward = 0.0;
  double total_comm_cost = 0.0;
  std::int64_t active_queries = 0;
  double modeled_wall_ms = 0.0;
};

RunSummary summarize(const std::string& run, int replicate,
                     const RunHistory& history) {
  RunSummary s;
  s.run = run;
  s.replicate = replicate;
  s.rounds = static_cast<std::int64_t>(history.rounds.size());
  s.final_pseudo_regret = history.cumulative_pseudo_regret();
  s.final_realized_regret =
      history.rounds.empty() ? 0.0 : history.rounds.back().regret_realized_cum;
  s.mean_reward = history.mean_realized_reward();
  s.total_comm_cost =
      history.rounds.empty() ? 0.0 : history.rounds.back().comm_cost_cum;
  s.active_queries = history.active_queries;
  s.modeled_wall_ms = history.modeled_wall_ms;
  return s;
}

}  // namespace

std::string render_run_csv(const RunHistory& history) {
  CsvBuilder csv("almab.run_history.v1",
                 {"round", "arm", "reward_realized", "reward_mean_agents",
                  "regret_pseudo_increment", "regret_pseudo_cum",
                  "regret_realized_cum", "comm_cost_cum", "issue_round",
                  "apply_round", "wall_ms"});
  for (const auto& r : history.rounds) {
    csv.add_row({format_int(r.round), format_int(r.arm),
                 format_number(r.reward_realized),
                 format_number(r.reward_mean),
                 format_number(r.regret_increment),
                 format_number(r.regret_pseudo_cum),
                 format_number(r.regret_realized_cum),
                 format_number(r.comm_cost_cum), format_int(r.issue_round),
                 format_int(r.apply_round), format_number(r.wall_ms)});
  }
  return csv.str();
}

AirfoilRun run_airfoil_bo(const DragSurfaceSpec& spec, const AirfoilConfig& cfg,
                          const GpHyperparams& hp, std::uint64_t seed) {
  spec.validate();
  hp.validate();
  if (cfg.init_points < 1) throw InputError("airfoil: init_points must be >= 1");
  if (cfg.grid_per_dim < 2) throw InputError("airfoil: grid_per_dim must be >= 2");
  const SearchBox box = DragSurfaceSpec::design_box();

  const Rng root(seed);
  Rng init_rng = root.split(11);
  Rng eval_rng = root.split(12);

  AirfoilRun run;
  const auto n0 = static_cast<std::size_t>(cfg.init_points);

  // Latin hypercube: one stratified coordinate permutation per dimension.
  std::vector<std::vector<double>> init_coords(2, std::vector<double>(n0));
  for (int dim = 0; dim < 2; ++dim) {
    std::vector<std::size_t> perm(n0);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n0; i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          init_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(perm[i - 1], perm[j]);
    }
    for (std::size_t i = 0; i < n0; ++i) {
      const double cell =
          (static_cast<double>(perm[i]) + init_rng.uniform()) /
          static_cast<double>(n0);
      init_coords[static_cast<std::size_t>(dim)][i] =
          box.lower[dim] + cell * (box.upper[dim] - box.lower[dim]);
    }
  }
  for (std::size_t i = 0; i < n0; ++i) {
    const double c = init_coords[0][i];
    const double t = init_coords[1][i];
    run.camber.push_back(c);
    run.thickness.push_back(t);
    run.observed.push_back(mock_cfd_drag(c, t, spec, eval_rng));
  }

  const std::vector<Candidate> grid =
      uniform_grid(box, {cfg.grid_per_dim, cfg.grid_per_dim});
  AcquisitionSpec acq;
  acq.kind = AcquisitionKind::expected_improvement;
  acq.batch_size = 1;
  acq.direction = Direction::minimize;

  const auto fit_current = [&]() {
    const auto n = static_cast<Eigen::Index>(run.observed.size());
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, 0) = run.camber[static_cast<std::size_t>(i)];
      x(i, 1) = run.thickness[static_cast<std::size_t>(i)];
      y[i] = run.observed[static_cast<std::size_t>(i)];
    }
    return StandardizedGp::fit(x, y, box, hp);
  };

  for (int it = 0; it < cfg.bo_iterations; ++it) {
    const StandardizedGp model = fit_current();
    const auto picks = select_candidates(grid, model, acq);
    const Candidate& next = grid[static_cast<std::size_t>(picks.front().pool_index)];
    const double c = next.coords[0];
    const double t = next.coords[1];
    run.camber.push_back(c);
    run.thickness.push_back(t);
    run.observed.push_back(mock_cfd_drag(c, t, spec, eval_rng));
  }

  const StandardizedGp final_model = fit_current();
  for (std::size_t i = 0; i < run.observed.size(); ++i) {
    const bool repeat = [&] {  // re-evaluated designs rank once
      for (std::size_t j = 0; j < i; ++j) {
        if (run.camber[j] == run.camber[i] &&
            run.thickness[j] == run.thickness[i]) {
          return true;
        }
      }
      return false;
    }();
    if (repeat) continue;
    Eigen::VectorXd x(2);
    x << run.camber[i], run.thickness[i];
    const GpPrediction p = final_model.predict(x);
    run.ranked.push_back(
        {run.camber[i], run.thickness[i], p.mean, std::sqrt(p.variance)});
  }
  std::stable_sort(run.ranked.begin(), run.ranked.end(),
                   [](const AirfoilDesign& a, const AirfoilDesign& b) {
                     return a.drag < b.drag;
                   });
  return run;
}

void cmd_simulate(const ExperimentConfig& config,
                  const std::filesystem::path& out_dir) {
  const auto env = config.environment.make_environment();

  for (const auto& named : config.runs) {
    std::vector<RunHistory> histories;
    histories.reserve(static_cast<std::size_t>(config.replicates));
    for (int k = 0; k < config.replicates; ++k) {
      histories.push_back(
          execute_run(*env, named, config.seed + static_cast<std::uint64_t>(k)));
      const auto path =
          out_dir / (named.name + "_rep" + std::to_string(k) + ".csv");
      write_file(path, render_run_csv(histories.back()));
    }

    CsvBuilder summary(
        "almab.run_summary.v1",
        {"run", "replicate", "rounds", "final_pseudo_regret",
         "final_realized_regret", "mean_reward", "total_comm_cost",
         "active_queries", "modeled_wall_ms"});
    std::vector<double> regrets, realized, rewards, comms, walls;
    for (int k = 0; k < config.replicates; ++k) {
      const RunSummary s = summarize(named.name, k, histories[static_cast<std::size_t>(k)]);
      regrets.push_back(s.final_pseudo_regret);
      realized.push_back(s.final_realized_regret);
      rewards.push_back(s.mean_reward);
      comms.push_back(s.total_comm_cost);
      walls.push_back(s.modeled_wall_ms);
      summary.add_row({s.run, format_int(s.replicate), format_int(s.rounds),
                       format_number(s.final_pseudo_regret),
                       format_number(s.final_realized_regret),
                       format_number(s.mean_reward),
                       format_number(s.total_comm_cost),
                       format_int(s.active_queries),
                       format_number(s.modeled_wall_ms)});
    }
    const auto aggregate_row = [&](const std::string& tag, double (*agg)(std::vector<double>)) {
      summary.add_row(
          {named.name, tag,
           format_int(static_cast<std::int64_t>(histories.front().rounds.size())),
           format_number(agg(regrets)), format_number(agg(realized)),
           format_number(agg(rewards)), format_number(agg(comms)),
           format_int(histories.front().active_queries),
           format_number(agg(walls))});
    };
    aggregate_row("mean", [](std::vector<double> v) { return mean_of(v); });
    aggregate_row("median", [](std::vector<double> v) { return median_of(std::move(v)); });
    write_file(out_dir / (named.name + "_summary.csv"), summary.str());

    // reward-vs-iteration chart: thin per-replicate traces plus their mean
    SvgChart reward_chart("Reward per iteration (" + named.name + ")",
                          "iteration", "mean agent reward");
    std::vector<double> xs;
    for (const auto& r : histories.front().rounds) {
      xs.push_back(static_cast<double>(r.round));
    }
    std::vector<double> mean_curve(xs.size(), 0.0);
    for (const auto& h : histories) {
      const auto ys = column_of(h.rounds, &RoundRecord::reward_mean);
      for (std::size_t i = 0; i < ys.size() && i < mean_curve.size(); ++i) {
        mean_curve[i] += ys[i] / static_cast<double>(histories.size());
      }
      reward_chart.add_line(xs, ys, kColorLightBlue, 1.0);
    }
    reward_chart.add_line(xs, mean_curve, kColorBlue, 2.0);
    reward_chart.add_legend_entry("replicates", kColorLightBlue);
    reward_chart.add_legend_entry("mean", kColorBlue);
    write_file(out_dir / (named.name + "_reward.svg"), reward_chart.render());

    // landscape chart for 1-D arm grids: true curve plus final mean estimates
    if (env->arm(0).coords.size() == 1 &&
        config.environment.kind == EnvironmentKind::mixture) {
      const MixtureSpec spec = config.environment.mixture.make_spec();
      SvgChart landscape("True landscape and estimated arm values (" +
                             named.name + ")",
                         "x", "expected reward");
      const double lo = config.environment.mixture.arm_lower;
      const double hi = config.environment.mixture.arm_upper;
      std::vector<double> cx, cy;
      for (int i = 0; i < 256; ++i) {
        const double x = lo + (hi - lo) * i / 255.0;
        cx.push_back(x);
        cy.push_back(spec.mixture_value(Eigen::VectorXd::Constant(1, x)));
      }
      landscape.add_line(cx, cy, kColorOrange, 2.0);
      std::vector<double> mx, my;
      const ArmStats& final_stats = histories.front().final_stats;
      for (int a = 0; a < env->arm_count(); ++a) {
        mx.push_back(env->arm(a).coords[0]);
        my.push_back(final_stats.mean(a));
      }
      landscape.add_markers(mx, my, kColorRed);
      landscape.add_legend_entry("true landscape", kColorOrange);
      landscape.add_legend_entry("estimated arms", kColorRed);
      write_file(out_dir / (named.name + "_landscape.svg"), landscape.render());
    }
    std::cout << "simulate: wrote " << config.replicates << " replicate(s) for '"
              << named.name << "' to " << out_dir.string() << "\n";
  }
}

void cmd_compare(const ExperimentConfig& config,
                 const std::filesystem::path& out_dir) {
  if (config.environment.eval_cost_ms <= 0.0) {
    throw ConfigError("compare requires environment.eval_cost_ms > 0");
  }
  const NamedRunConfig* seq = nullptr;
  const NamedRunConfig* dist = nullptr;
  for (const auto& named : config.runs) {
    if (!named.distributed && seq == nullptr) seq = &named;
    if (named.distributed && dist == nullptr) dist = &named;
  }
  if (seq == nullptr || dist == nullptr) {
    throw ConfigError("compare needs one sequential and one distributed run");
  }

  const auto env = config.environment.make_environment();

  std::vector<double> seq_regret, dist_regret, seq_reward, dist_reward;
  std::vector<double> seq_wall, dist_wall, speedups;
  double seq_measured = 0.0, dist_measured = 0.0;

  CsvBuilder csv("almab.compare.v1",
                 {"mode", "replicate", "wall_clock_s", "cumulative_regret",
                  "mean_reward", "speedup", "regret_ci_lo", "regret_ci_hi",
                  "wilcoxon_w", "wilcoxon_p"});

  for (int k = 0; k < config.replicates; ++k) {
    RunConfig seq_cfg = seq->run;
    RunConfig dist_cfg = dist->run;
    seq_cfg.seed = dist_cfg.seed = config.seed + static_cast<std::uint64_t>(k);
    const WallClockComparison cmp = wall_clock_compare(*env, seq_cfg, dist_cfg);

    write_file(out_dir / ("compare_rep" + std::to_string(k) + "_sequential.csv"),
               render_run_csv(cmp.sequential_history));
    write_file(out_dir / ("compare_rep" + std::to_string(k) + "_distributed.csv"),
               render_run_csv(cmp.distributed_history));

    seq_regret.push_back(cmp.sequential.pseudo_regret);
    dist_regret.push_back(cmp.distributed.pseudo_regret);
    seq_reward.push_back(cmp.sequential.mean_reward);
    dist_reward.push_back(cmp.distributed.mean_reward);
    seq_wall.push_back(cmp.sequential.modeled_wall_ms / 1000.0);
    dist_wall.push_back(cmp.distributed.modeled_wall_ms / 1000.0);
    speedups.push_back(cmp.speedup_modeled);
    seq_measured += cmp.sequential.measured_wall_s;
    dist_measured += cmp.distributed.measured_wall_s;

    csv.add_row({"sequential", format_int(k), format_number(seq_wall.back()),
                 format_number(seq_regret.back()),
                 format_number(seq_reward.back()), "", "", "", "", ""});
    csv.add_row({"distributed", format_int(k), format_number(dist_wall.back()),
                 format_number(dist_regret.back()),
                 format_number(dist_reward.back()),
                 format_number(speedups.back()), "", "", "", ""});
  }

  const BootstrapCi seq_ci =
      bootstrap_ci(seq_regret, config.bootstrap, Statistic::mean);
  const BootstrapCi dist_ci =
      bootstrap_ci(dist_regret, config.bootstrap, Statistic::mean);
  csv.add_row({"sequential", "aggregate", format_number(mean_of(seq_wall)),
               format_number(seq_ci.point), format_number(mean_of(seq_reward)),
               "", format_number(seq_ci.lower), format_number(seq_ci.upper),
               "", ""});
  std::string w_cell, p_cell;
  if (config.replicates >= 6) {
    const WilcoxonResult test = wilcoxon_signed_rank(seq_regret, dist_regret);
    w_cell = format_number(test.statistic);
    p_cell = format_number(test.p_value);
  }
  csv.add_row({"distributed", "aggregate", format_number(mean_of(dist_wall)),
               format_number(dist_ci.point), format_number(mean_of(dist_reward)),
               format_number(mean_of(speedups)), format_number(dist_ci.lower),
               format_number(dist_ci.upper), w_cell, p_cell});
  write_file(out_dir / "compare_summary.csv", csv.str());

  const double n = static_cast<double>(config.replicates);
  std::cout << "compare: modeled speedup " << format_number(mean_of(speedups))
            << "x; host-measured " << format_number(seq_measured / n) << "s vs "
            << format_number(dist_measured / n) << "s per replicate ("
            << format_number(dist_measured > 0.0 ? seq_measured / dist_measured
                                                 : 1.0)
            << "x)\n"
            << "compare: median regret sequential "
            << format_number(median_of(seq_regret)) << ", distributed "
            << format_number(median_of(dist_regret)) << "\n";
}

void cmd_airfoil(const ExperimentConfig& config,
                 const std::filesystem::path& out_dir) {
  if (config.environment.kind != EnvironmentKind::drag) {
    throw ConfigError("airfoil requires environment.type = drag");
  }
  for (int k = 0; k < config.replicates; ++k) {
    const AirfoilRun run =
        run_airfoil_bo(config.environment.drag, config.airfoil,
                       config.surrogate, config.seed + static_cast<std::uint64_t>(k));

    CsvBuilder history("almab.airfoil_history.v1",
                       {"evaluation", "phase", "camber", "thickness",
                        "observed_drag"});
    for (std::size_t i = 0; i < run.observed.size(); ++i) {
      history.add_row(
          {format_int(static_cast<std::int64_t>(i)),
           i < static_cast<std::size_t>(config.airfoil.init_points) ? "init"
                                                                    : "bo",
           format_number(run.camber[i]), format_number(run.thickness[i]),
           format_number(run.observed[i])});
    }
    write_file(out_dir / ("airfoil_rep" + std::to_string(k) + "_history.csv"),
               history.str());

    CsvBuilder designs("almab.airfoil_designs.v1",
                       {"rank", "camber", "thickness", "drag", "posterior_sd"});
    const int top_k = std::min<int>(config.airfoil.top_k,
                                    static_cast<int>(run.ranked.size()));
    for (int i = 0; i < top_k; ++i) {
      const AirfoilDesign& d = run.ranked[static_cast<std::size_t>(i)];
      designs.add_row({format_int(i + 1), format_number(d.camber),
                       format_number(d.thickness), format_number(d.drag),
                       format_number(d.posterior_sd)});
    }
    write_file(out_dir / ("airfoil_rep" + std::to_string(k) + "_designs.csv"),
               designs.str());

    SvgChart scatter("Sampled designs vs drag", "parameter value",
                     "observed drag");
    scatter.add_markers(run.camber, run.observed, kColorBlue,
                        SvgChart::Marker::circle);
    scatter.add_markers(run.thickness, run.observed, kColorOrange,
                        SvgChart::Marker::triangle);
    scatter.add_legend_entry("camber", kColorBlue);
    scatter.add_legend_entry("thickness", kColorOrange);
    write_file(out_dir / ("airfoil_rep" + std::to_string(k) + "_scatter.svg"),
               scatter.render());

    std::cout << "airfoil: replicate " << k << " best drag "
              << format_number(run.ranked.front().drag) << " at ("
              << format_number(run.ranked.front().camber) << ", "
              << format_number(run.ranked.front().thickness) << ")\n";
  }
}

void cmd_scaling(const ExperimentConfig& config,
                 const std::filesystem::path& out_dir) {
  const ScalingParams& params = config.scaling;
  params.validate();

  std::string k_closed, k_numeric;
  double k_closed_val = -1.0, k_numeric_val = -1.0;
  try {
    const OptimalAgents opt = optimal_agents(params);
    k_closed = format_number(opt.closed_form);
    k_numeric = format_number(opt.numeric);
    k_closed_val = opt.closed_form;
    k_numeric_val = opt.numeric;
  } catch (const InputError& e) {
    std::cout << "scaling: no finite optimal agent count (" << e.what() << ")\n";
  }

  CsvBuilder csv("almab.scaling.v1",
                 {"K", "time", "speedup_amdahl", "speedup_gustafson",
                  "efficiency", "k_star_closed_form", "k_star_numeric"});
  std::vector<double> ks, times, amdahl, gustafson, eta;
  for (int k = 1; k <= config.scaling_k_max; ++k) {
    ks.push_back(k);
    times.push_back(amdahl_time(k, params));
    amdahl.push_back(amdahl_speedup(k, params));
    gustafson.push_back(gustafson_speedup(k, params));
    eta.push_back(parallel_efficiency(k, params));
    csv.add_row({format_int(k), format_number(times.back()),
                 format_number(amdahl.back()), format_number(gustafson.back()),
                 format_number(eta.back()), k_closed, k_numeric});
  }
  write_file(out_dir / "scaling_sweep.csv", csv.str());

  SvgChart chart("Speedup and efficiency vs agent count", "agents K", "value");
  chart.add_line(ks, amdahl, kColorBlue, 2.0);
  chart.add_line(ks, gustafson, kColorGreen, 2.0);
  chart.add_line(ks, eta, kColorOrange, 2.0);
  chart.add_legend_entry("Amdahl S(K)", kColorBlue);
  chart.add_legend_entry("Gustafson S_G(K)", kColorGreen);
  chart.add_legend_entry("efficiency eta(K)", kColorOrange);
  if (k_closed_val >= 1.0 && k_closed_val <= config.scaling_k_max) {
    chart.add_vline(k_closed_val, kColorRed, "K* closed form");
  }
  if (k_numeric_val >= 1.0 && k_numeric_val <= config.scaling_k_max) {
    chart.add_vline(k_numeric_val, kColorPurple, "K* numeric");
  }
  write_file(out_dir / "scaling_curves.svg", chart.render());
  std::cout << "scaling: swept K = 1.." << config.scaling_k_max
            << (k_closed.empty() ? "" : ", K* closed form " + k_closed +
                                            ", numeric " + k_numeric)
            << "\n";
}

namespace {

double extract_metric(const std::filesystem::path& file,
                      const std::string& metric) {
  const CsvTable table = parse_csv(read_file(file));
  if (table.rows.empty()) throw IoError("empty run history: " + file.string());
  if (metric == "final_pseudo_regret") {
    const int col = table.column("regret_pseudo_cum");
    if (col < 0) throw IoError("missing regret column in " + file.string());
    return std::stod(table.rows.back()[static_cast<std::size_t>(col)]);
  }
  const int col = table.column("reward_mean_agents");
  if (col < 0) throw IoError("missing reward column in " + file.string());
  double total = 0.0;
  for (const auto& row : table.rows) {
    total += std::stod(row[static_cast<std::size_t>(col)]);
  }
  return total / static_cast<double>(table.rows.size());
}

}  // namespace

void cmd_analyze(const ExperimentConfig& config,
                 const std::filesystem::path& out_dir) {
  const AnalyzeConfig& an = config.analyze;
  if (an.group_a.empty()) {
    throw ConfigError("analyze requires analyze.group_a input files");
  }

  const auto collect = [&](const std::vector<std::string>& files) {
    std::vector<double> values;
    values.reserve(files.size());
    for (const auto& f : files) values.push_back(extract_metric(f, an.metric));
    return values;
  };
  const std::vector<double> a = collect(an.group_a);
  const std::vector<double> b = collect(an.group_b);

  const std::string stat_name =
      an.statistic == Statistic::mean ? "mean" : "median";
  CsvBuilder csv("almab.analysis.v1",
                 {"group", "metric", "statistic", "n", "point", "ci_lo",
                  "ci_hi", "p_value"});
  const BootstrapCi ci_a = bootstrap_ci(a, config.bootstrap, an.statistic);
  csv.add_row({"a", an.metric, stat_name,
               format_int(static_cast<std::int64_t>(a.size())),
               format_number(ci_a.point), format_number(ci_a.lower),
               format_number(ci_a.upper), ""});
  if (!b.empty()) {
    const BootstrapCi ci_b = bootstrap_ci(b, config.bootstrap, an.statistic);
    csv.add_row({"b", an.metric, stat_name,
                 format_int(static_cast<std::int64_t>(b.size())),
                 format_number(ci_b.point), format_number(ci_b.lower),
                 format_number(ci_b.upper), ""});
    const WilcoxonResult test = wilcoxon_signed_rank(a, b);
    csv.add_row({"paired", an.metric, "wilcoxon",
                 format_int(test.retained), format_number(test.statistic), "",
                 "", format_number(test.p_value)});
  }
  write_file(out_dir / "analysis_summary.csv", csv.str());
  std::cout << "analyze: " << a.size() << " file(s) in group a, " << b.size()
            << " in group b\n";
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Bandit-driven black-box optimization engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::int64_t seed_override = -1;
  int replicates_override = -1;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment JSON config")
        ->required();
    sub->add_option("--out", out_override, "output directory override");
    sub->add_option("--seed", seed_override, "base seed override");
    sub->add_option("--replicates", replicates_override,
                    "replicate count override");
  };

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run the bandit loop and emit history CSVs and charts");
  CLI::App* compare = app.add_subcommand(
      "compare", "sequential vs distributed comparison at a shared budget");
  CLI::App* airfoil = app.add_subcommand(
      "airfoil", "surrogate-guided drag minimization");
  CLI::App* scaling = app.add_subcommand(
      "scaling", "analytic speedup and efficiency sweep");
  CLI::App* analyze = app.add_subcommand(
      "analyze", "bootstrap CIs and paired tests over run histories");
  for (CLI::App* sub : {simulate, compare, airfoil, scaling, analyze}) {
    add_common(sub);
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ExperimentConfig config = ExperimentConfig::load(config_path);
    if (seed_override >= 0) {
      config.seed = static_cast<std::uint64_t>(seed_override);
      for (auto& named : config.runs) named.run.seed = config.seed;
    }
    if (replicates_override >= 1) config.replicates = replicates_override;
    const std::filesystem::path out_dir =
        out_override.empty() ? std::filesystem::path(config.output_dir)
                             : std::filesystem::path(out_override);

    if (simulate->parsed()) {
      cmd_simulate(config, out_dir);
    } else if (compare->parsed()) {
      cmd_compare(config, out_dir);
    } else if (airfoil->parsed()) {
      cmd_airfoil(config, out_dir);
    } else if (scaling->parsed()) {
      cmd_scaling(config, out_dir);
    } else if (analyze->parsed()) {
      cmd_analyze(config, out_dir);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace almab
