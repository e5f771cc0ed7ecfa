#include "almab/config.hpp"

#include <set>

#include "almab/csv.hpp"
#include "almab/errors.hpp"
#include "json.hpp"

namespace almab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError("config error at " + path + ": " + message);
}

void expect_keys(const json& node, const std::string& path,
                 const std::set<std::string>& allowed) {
  if (!node.is_object()) fail(path, "expected an object");
  for (const auto& item : node.items()) {
    if (!allowed.contains(item.key())) {
      fail(path + "/" + item.key(), "unknown key");
    }
  }
}

double get_number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

std::int64_t get_integer(const json& node, const std::string& path) {
  if (!node.is_number_integer()) fail(path, "expected an integer");
  return node.get<std::int64_t>();
}

bool get_bool(const json& node, const std::string& path) {
  if (!node.is_boolean()) fail(path, "expected a boolean");
  return node.get<bool>();
}

std::string get_string(const json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected a string");
  return node.get<std::string>();
}

Eigen::VectorXd get_vector(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) fail(path, "expected a numeric array");
  Eigen::VectorXd v(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        get_number(node[i], path + "/" + std::to_string(i));
  }
  return v;
}

Eigen::MatrixXd get_matrix(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) fail(path, "expected a matrix");
  const std::size_t rows = node.size();
  Eigen::MatrixXd m;
  for (std::size_t i = 0; i < rows; ++i) {
    const Eigen::VectorXd row =
        get_vector(node[i], path + "/" + std::to_string(i));
    if (i == 0) {
      m.resize(static_cast<Eigen::Index>(rows), row.size());
    } else if (row.size() != m.cols()) {
      fail(path, "ragged matrix");
    }
    m.row(static_cast<Eigen::Index>(i)) = row;
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    arr.push_back(vector_to_json(m.row(i)));
  }
  return arr;
}

AcquisitionKind parse_acquisition_kind(const std::string& s,
                                       const std::string& path) {
  if (s == "expected_improvement") return AcquisitionKind::expected_improvement;
  if (s == "variance") return AcquisitionKind::variance;
  if (s == "mutual_information") return AcquisitionKind::mutual_information;
  if (s == "k_center") return AcquisitionKind::k_center;
  fail(path, "unknown acquisition kind '" + s + "'");
}

std::string acquisition_kind_name(AcquisitionKind k) {
  switch (k) {
    case AcquisitionKind::expected_improvement: return "expected_improvement";
    case AcquisitionKind::variance: return "variance";
    case AcquisitionKind::mutual_information: return "mutual_information";
    case AcquisitionKind::k_center: return "k_center";
  }
  return "variance";
}

AcquisitionSpec parse_acquisition(const json& node, const std::string& path) {
  expect_keys(node, path, {"kind", "batch_size", "direction"});
  AcquisitionSpec spec;
  if (node.contains("kind")) {
    spec.kind = parse_acquisition_kind(get_string(node["kind"], path + "/kind"),
                                       path + "/kind");
  }
  if (node.contains("batch_size")) {
    spec.batch_size =
        static_cast<int>(get_integer(node["batch_size"], path + "/batch_size"));
  }
  if (node.contains("direction")) {
    const std::string d = get_string(node["direction"], path + "/direction");
    if (d == "minimize") {
      spec.direction = Direction::minimize;
    } else if (d == "maximize") {
      spec.direction = Direction::maximize;
    } else {
      fail(path + "/direction", "expected minimize or maximize");
    }
  }
  return spec;
}

json acquisition_to_json(const AcquisitionSpec& spec) {
  return json{{"kind", acquisition_kind_name(spec.kind)},
              {"batch_size", spec.batch_size},
              {"direction", spec.direction == Direction::minimize
                                ? "minimize"
                                : "maximize"}};
}

GpHyperparams parse_surrogate(const json& node, const std::string& path) {
  expect_keys(node, path, {"lengthscale", "signal_var", "noise_var"});
  GpHyperparams hp;
  if (node.contains("lengthscale")) {
    hp.lengthscale = get_number(node["lengthscale"], path + "/lengthscale");
  }
  if (node.contains("signal_var")) {
    hp.signal_var = get_number(node["signal_var"], path + "/signal_var");
  }
  if (node.contains("noise_var")) {
    hp.noise_var = get_number(node["noise_var"], path + "/noise_var");
  }
  return hp;
}

json surrogate_to_json(const GpHyperparams& hp) {
  return json{{"lengthscale", hp.lengthscale},
              {"signal_var", hp.signal_var},
              {"noise_var", hp.noise_var}};
}

RunConfig parse_run(const json& node, const std::string& path,
                    NamedRunConfig& named) {
  expect_keys(node, path,
              {"name", "mode", "rounds", "agents", "policy", "ucb_c",
               "thompson_model", "delay_max", "comm_cost_per_report", "lambda",
               "independent_agents", "use_acquisition"});
  RunConfig run;
  if (node.contains("name")) named.name = get_string(node["name"], path + "/name");
  if (node.contains("mode")) {
    const std::string m = get_string(node["mode"], path + "/mode");
    if (m == "sequential") {
      named.distributed = false;
    } else if (m == "distributed") {
      named.distributed = true;
    } else {
      fail(path + "/mode", "expected sequential or distributed");
    }
  }
  if (node.contains("rounds")) run.rounds = get_integer(node["rounds"], path + "/rounds");
  if (node.contains("agents")) {
    run.agents = static_cast<int>(get_integer(node["agents"], path + "/agents"));
  }
  if (node.contains("policy")) {
    const std::string p = get_string(node["policy"], path + "/policy");
    if (p == "ucb") {
      run.policy = PolicyKind::ucb;
    } else if (p == "thompson") {
      run.policy = PolicyKind::thompson;
    } else {
      fail(path + "/policy", "expected ucb or thompson");
    }
  }
  if (node.contains("ucb_c")) run.ucb_c = get_number(node["ucb_c"], path + "/ucb_c");
  if (node.contains("thompson_model")) {
    const std::string m = get_string(node["thompson_model"], path + "/thompson_model");
    if (m == "bernoulli") {
      run.thompson_model = RewardModel::bernoulli;
    } else if (m == "gaussian") {
      run.thompson_model = RewardModel::gaussian;
    } else {
      fail(path + "/thompson_model", "expected bernoulli or gaussian");
    }
  }
  if (node.contains("delay_max")) {
    run.delay_max = get_integer(node["delay_max"], path + "/delay_max");
  }
  if (node.contains("comm_cost_per_report")) {
    run.comm_cost_per_report =
        get_number(node["comm_cost_per_report"], path + "/comm_cost_per_report");
  }
  if (node.contains("lambda")) run.lambda = get_number(node["lambda"], path + "/lambda");
  if (node.contains("independent_agents")) {
    run.independent_agents =
        get_bool(node["independent_agents"], path + "/independent_agents");
  }
  if (node.contains("use_acquisition")) {
    named.use_acquisition =
        get_bool(node["use_acquisition"], path + "/use_acquisition");
  }
  return run;
}

json run_to_json(const NamedRunConfig& named) {
  const RunConfig& run = named.run;
  return json{{"name", named.name},
              {"mode", named.distributed ? "distributed" : "sequential"},
              {"rounds", run.rounds},
              {"agents", run.agents},
              {"policy", run.policy == PolicyKind::ucb ? "ucb" : "thompson"},
              {"ucb_c", run.ucb_c},
              {"thompson_model", run.thompson_model == RewardModel::bernoulli
                                     ? "bernoulli"
                                     : "gaussian"},
              {"delay_max", run.delay_max},
              {"comm_cost_per_report", run.comm_cost_per_report},
              {"lambda", run.lambda},
              {"independent_agents", run.independent_agents},
              {"use_acquisition", named.use_acquisition}};
}

MixtureEnvConfig parse_mixture(const json& node, const std::string& path) {
  expect_keys(node, path, {"components", "noise_sd", "arms"});
  MixtureEnvConfig cfg = ExperimentConfig::reference_mixture();
  if (node.contains("components")) {
    const json& comps = node["components"];
    if (!comps.is_array() || comps.empty()) {
      fail(path + "/components", "expected a non-empty array");
    }
    cfg.components.clear();
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string cpath = path + "/components/" + std::to_string(i);
      expect_keys(comps[i], cpath, {"weight", "mean", "cov"});
      MixtureComponent mc;
      if (!comps[i].contains("weight") || !comps[i].contains("mean") ||
          !comps[i].contains("cov")) {
        fail(cpath, "component needs weight, mean and cov");
      }
      mc.weight = get_number(comps[i]["weight"], cpath + "/weight");
      mc.mean = get_vector(comps[i]["mean"], cpath + "/mean");
      mc.cov = get_matrix(comps[i]["cov"], cpath + "/cov");
      cfg.components.push_back(std::move(mc));
    }
  }
  if (node.contains("noise_sd")) {
    cfg.noise_sd = get_number(node["noise_sd"], path + "/noise_sd");
  }
  if (node.contains("arms")) {
    const std::string apath = path + "/arms";
    expect_keys(node["arms"], apath, {"lower", "upper", "count"});
    if (node["arms"].contains("lower")) {
      cfg.arm_lower = get_number(node["arms"]["lower"], apath + "/lower");
    }
    if (node["arms"].contains("upper")) {
      cfg.arm_upper = get_number(node["arms"]["upper"], apath + "/upper");
    }
    if (node["arms"].contains("count")) {
      cfg.arm_count =
          static_cast<int>(get_integer(node["arms"]["count"], apath + "/count"));
    }
  }
  return cfg;
}

DragSurfaceSpec parse_drag(const json& node, const std::string& path) {
  expect_keys(node, path,
              {"camber_opt", "thickness_opt", "base_drag", "curvature_c",
               "curvature_t", "cross_term", "noise_sd", "eval_delay_ms"});
  DragSurfaceSpec spec;
  const auto set = [&](const char* key, double& field) {
    if (node.contains(key)) {
      field = get_number(node[key], path + "/" + key);
    }
  };
  set("camber_opt", spec.camber_opt);
  set("thickness_opt", spec.thickness_opt);
  set("base_drag", spec.base_drag);
  set("curvature_c", spec.curvature_c);
  set("curvature_t", spec.curvature_t);
  set("cross_term", spec.cross_term);
  set("noise_sd", spec.noise_sd);
  set("eval_delay_ms", spec.eval_delay_ms);
  return spec;
}

json drag_to_json(const DragSurfaceSpec& spec) {
  return json{{"camber_opt", spec.camber_opt},
              {"thickness_opt", spec.thickness_opt},
              {"base_drag", spec.base_drag},
              {"curvature_c", spec.curvature_c},
              {"curvature_t", spec.curvature_t},
              {"cross_term", spec.cross_term},
              {"noise_sd", spec.noise_sd},
              {"eval_delay_ms", spec.eval_delay_ms}};
}

ScalingParams parse_scaling(const json& node, const std::string& path,
                            int& k_max) {
  expect_keys(node, path,
              {"serial_fraction", "efficiency", "comm_alpha", "comm_beta",
               "task_costs", "k_max"});
  ScalingParams params;
  if (node.contains("serial_fraction")) {
    params.serial_fraction =
        get_number(node["serial_fraction"], path + "/serial_fraction");
  }
  if (node.contains("efficiency")) {
    params.efficiency = get_number(node["efficiency"], path + "/efficiency");
  }
  if (node.contains("comm_alpha")) {
    params.comm_alpha = get_number(node["comm_alpha"], path + "/comm_alpha");
  }
  if (node.contains("comm_beta")) {
    params.comm_beta = get_number(node["comm_beta"], path + "/comm_beta");
  }
  if (node.contains("task_costs")) {
    const Eigen::VectorXd v = get_vector(node["task_costs"], path + "/task_costs");
    params.task_costs.assign(v.data(), v.data() + v.size());
  }
  if (node.contains("k_max")) {
    k_max = static_cast<int>(get_integer(node["k_max"], path + "/k_max"));
  }
  return params;
}

AirfoilConfig parse_airfoil(const json& node, const std::string& path) {
  expect_keys(node, path, {"init_points", "bo_iterations", "grid_per_dim", "top_k"});
  AirfoilConfig cfg;
  const auto set = [&](const char* key, int& field) {
    if (node.contains(key)) {
      field = static_cast<int>(get_integer(node[key], path + "/" + key));
    }
  };
  set("init_points", cfg.init_points);
  set("bo_iterations", cfg.bo_iterations);
  set("grid_per_dim", cfg.grid_per_dim);
  set("top_k", cfg.top_k);
  return cfg;
}

AnalyzeConfig parse_analyze(const json& node, const std::string& path) {
  expect_keys(node, path, {"group_a", "group_b", "metric", "statistic"});
  AnalyzeConfig cfg;
  const auto get_list = [&](const char* key, std::vector<std::string>& out) {
    if (!node.contains(key)) return;
    const json& arr = node[key];
    if (!arr.is_array()) fail(path + "/" + key, "expected an array of paths");
    out.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.push_back(get_string(arr[i], path + "/" + key + "/" + std::to_string(i)));
    }
  };
  get_list("group_a", cfg.group_a);
  get_list("group_b", cfg.group_b);
  if (node.contains("metric")) {
    cfg.metric = get_string(node["metric"], path + "/metric");
    if (cfg.metric != "final_pseudo_regret" && cfg.metric != "mean_reward") {
      fail(path + "/metric", "expected final_pseudo_regret or mean_reward");
    }
  }
  if (node.contains("statistic")) {
    const std::string s = get_string(node["statistic"], path + "/statistic");
    if (s == "mean") {
      cfg.statistic = Statistic::mean;
    } else if (s == "median") {
      cfg.statistic = Statistic::median;
    } else {
      fail(path + "/statistic", "expected mean or median");
    }
  }
  return cfg;
}

BootstrapSpec parse_bootstrap(const json& node, const std::string& path) {
  expect_keys(node, path, {"resamples", "alpha", "seed"});
  BootstrapSpec spec;
  if (node.contains("resamples")) {
    spec.resamples =
        static_cast<int>(get_integer(node["resamples"], path + "/resamples"));
  }
  if (node.contains("alpha")) {
    spec.alpha = get_number(node["alpha"], path + "/alpha");
  }
  if (node.contains("seed")) {
    spec.seed = static_cast<std::uint64_t>(get_integer(node["seed"], path + "/seed"));
  }
  return spec;
}

}  // namespace

MixtureSpec MixtureEnvConfig::make_spec() const {
  return MixtureSpec(components, noise_sd);
}

std::unique_ptr<Environment> EnvironmentConfig::make_environment() const {
  if (kind != EnvironmentKind::mixture) {
    throw ConfigError(
        "bandit runs need a mixture environment; the drag surface drives the "
        "surrogate loop");
  }
  return std::make_unique<MixtureBanditEnv>(
      mixture.make_spec(),
      uniform_arm_grid(mixture.arm_lower, mixture.arm_upper, mixture.arm_count),
      eval_cost_ms);
}

MixtureEnvConfig ExperimentConfig::reference_mixture() {
  MixtureEnvConfig cfg;
  cfg.components.clear();
  const double weights[] = {0.4, 0.35, 0.25};
  const double means[] = {0.2, 0.55, 0.85};
  const double vars[] = {0.004, 0.003, 0.005};
  for (int i = 0; i < 3; ++i) {
    MixtureComponent mc;
    mc.weight = weights[i];
    mc.mean = Eigen::VectorXd::Constant(1, means[i]);
    mc.cov = Eigen::MatrixXd::Constant(1, 1, vars[i]);
    cfg.components.push_back(std::move(mc));
  }
  cfg.noise_sd = 0.1;
  cfg.arm_lower = 0.0;
  cfg.arm_upper = 1.0;
  cfg.arm_count = 15;
  return cfg;
}

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }

  expect_keys(doc, "",
              {"environment", "runs", "acquisition", "surrogate", "scaling",
               "airfoil", "analyze", "bootstrap", "replicates", "seed",
               "output_dir"});

  ExperimentConfig cfg;
  cfg.environment.mixture = reference_mixture();

  if (doc.contains("environment")) {
    const json& env = doc["environment"];
    expect_keys(env, "/environment",
                {"type", "mixture", "drag", "eval_cost_ms"});
    if (env.contains("type")) {
      const std::string t = get_string(env["type"], "/environment/type");
      if (t == "mixture") {
        cfg.environment.kind = EnvironmentKind::mixture;
      } else if (t == "drag") {
        cfg.environment.kind = EnvironmentKind::drag;
      } else {
        fail("/environment/type", "expected mixture or drag");
      }
    }
    if (env.contains("mixture")) {
      cfg.environment.mixture = parse_mixture(env["mixture"], "/environment/mixture");
    }
    if (env.contains("drag")) {
      cfg.environment.drag = parse_drag(env["drag"], "/environment/drag");
    }
    if (env.contains("eval_cost_ms")) {
      cfg.environment.eval_cost_ms =
          get_number(env["eval_cost_ms"], "/environment/eval_cost_ms");
    }
  }

  if (doc.contains("acquisition")) {
    cfg.acquisition = parse_acquisition(doc["acquisition"], "/acquisition");
  }
  if (doc.contains("surrogate")) {
    cfg.surrogate = parse_surrogate(doc["surrogate"], "/surrogate");
  }
  if (doc.contains("scaling")) {
    cfg.scaling = parse_scaling(doc["scaling"], "/scaling", cfg.scaling_k_max);
  }
  if (doc.contains("airfoil")) {
    cfg.airfoil = parse_airfoil(doc["airfoil"], "/airfoil");
  }
  if (doc.contains("analyze")) {
    cfg.analyze = parse_analyze(doc["analyze"], "/analyze");
  }
  if (doc.contains("bootstrap")) {
    cfg.bootstrap = parse_bootstrap(doc["bootstrap"], "/bootstrap");
  }
  if (doc.contains("replicates")) {
    cfg.replicates =
        static_cast<int>(get_integer(doc["replicates"], "/replicates"));
  }
  if (doc.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(get_integer(doc["seed"], "/seed"));
  }
  if (doc.contains("output_dir")) {
    cfg.output_dir = get_string(doc["output_dir"], "/output_dir");
  }

  if (doc.contains("runs")) {
    const json& runs = doc["runs"];
    if (!runs.is_array() || runs.empty()) {
      fail("/runs", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < runs.size(); ++i) {
      NamedRunConfig named;
      named.name = "run" + std::to_string(i);
      named.run = parse_run(runs[i], "/runs/" + std::to_string(i), named);
      cfg.runs.push_back(std::move(named));
    }
  } else {
    NamedRunConfig named;
    named.name = "sequential";
    cfg.runs.push_back(std::move(named));
  }

  // attach shared specs to each run so the scheduler sees one config value
  for (auto& named : cfg.runs) {
    named.run.surrogate = cfg.surrogate;
    if (named.use_acquisition) {
      if (!cfg.acquisition) {
        fail("/runs", "use_acquisition requires a top-level acquisition block");
      }
      named.run.acquisition = cfg.acquisition;
    }
    named.run.seed = cfg.seed;
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

std::string ExperimentConfig::serialize() const {
  json env{{"type", environment.kind == EnvironmentKind::mixture ? "mixture"
                                                                 : "drag"},
           {"eval_cost_ms", environment.eval_cost_ms}};
  json comps = json::array();
  for (const auto& c : environment.mixture.components) {
    comps.push_back(json{{"weight", c.weight},
                         {"mean", vector_to_json(c.mean)},
                         {"cov", matrix_to_json(c.cov)}});
  }
  env["mixture"] = json{{"components", comps},
                        {"noise_sd", environment.mixture.noise_sd},
                        {"arms", json{{"lower", environment.mixture.arm_lower},
                                      {"upper", environment.mixture.arm_upper},
                                      {"count", environment.mixture.arm_count}}}};
  env["drag"] = drag_to_json(environment.drag);

  json run_list = json::array();
  for (const auto& named : runs) run_list.push_back(run_to_json(named));

  json doc{{"environment", env},
           {"runs", run_list},
           {"surrogate", surrogate_to_json(surrogate)},
           {"scaling", json{{"serial_fraction", scaling.serial_fraction},
                            {"efficiency", scaling.efficiency},
                            {"comm_alpha", scaling.comm_alpha},
                            {"comm_beta", scaling.comm_beta},
                            {"task_costs", scaling.task_costs},
                            {"k_max", scaling_k_max}}},
           {"airfoil", json{{"init_points", airfoil.init_points},
                            {"bo_iterations", airfoil.bo_iterations},
                            {"grid_per_dim", airfoil.grid_per_dim},
                            {"top_k", airfoil.top_k}}},
           {"analyze", json{{"group_a", analyze.group_a},
                            {"group_b", analyze.group_b},
                            {"metric", analyze.metric},
                            {"statistic", analyze.statistic == Statistic::mean
                                              ? "mean"
                                              : "median"}}},
           {"bootstrap", json{{"resamples", bootstrap.resamples},
                              {"alpha", bootstrap.alpha},
                              {"seed", static_cast<std::int64_t>(bootstrap.seed)}}},
           {"replicates", replicates},
           {"seed", static_cast<std::int64_t>(seed)},
           {"output_dir", output_dir}};
  if (acquisition) doc["acquisition"] = acquisition_to_json(*acquisition);
  return doc.dump(2) + "\n";
}

void ExperimentConfig::validate() const {
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (runs.empty()) throw ConfigError("at least one run required");
  if (environment.eval_cost_ms < 0.0) {
    throw ConfigError("eval_cost_ms must be >= 0");
  }
  if (scaling_k_max < 1) throw ConfigError("scaling k_max must be >= 1");
  if (airfoil.init_points < 1) throw ConfigError("airfoil init_points must be >= 1");
  if (airfoil.bo_iterations < 0) {
    throw ConfigError("airfoil bo_iterations must be >= 0");
  }
  if (airfoil.grid_per_dim < 2) throw ConfigError("airfoil grid_per_dim must be >= 2");
  if (airfoil.top_k < 1) throw ConfigError("airfoil top_k must be >= 1");

  try {
    if (environment.kind == EnvironmentKind::mixture) {
      environment.mixture.make_spec();
      if (environment.mixture.arm_count < 1) {
        throw ConfigError("arm count must be >= 1");
      }
      if (environment.mixture.arm_lower > environment.mixture.arm_upper) {
        throw ConfigError("arm grid lower > upper");
      }
    }
    environment.drag.validate();
    for (const auto& named : runs) named.run.validate();
    if (acquisition) acquisition->validate();
    surrogate.validate();
    scaling.validate();
    bootstrap.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace almab
