#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "almab/acquisition.hpp"
#include "almab/env.hpp"
#include "almab/scaling.hpp"
#include "almab/sched.hpp"
#include "almab/stats.hpp"
#include "almab/surrogate.hpp"

namespace almab {

enum class EnvironmentKind { mixture, drag };

struct MixtureEnvConfig {
  std::vector<MixtureComponent> components;
  double noise_sd = 0.1;
  double arm_lower = 0.0;
  double arm_upper = 1.0;
  int arm_count = 15;

  MixtureSpec make_spec() const;
};

struct EnvironmentConfig {
  EnvironmentKind kind = EnvironmentKind::mixture;
  MixtureEnvConfig mixture;
  DragSurfaceSpec drag;
  double eval_cost_ms = 0.0;

  /// Bandit environment (mixture only; drag drives the surrogate loop).
  std::unique_ptr<Environment> make_environment() const;
};

struct NamedRunConfig {
  std::string name = "run";
  bool distributed = false;  // dispatches run_sequential vs run_distributed
  bool use_acquisition = false;
  RunConfig run;
};

struct AirfoilConfig {
  int init_points = 5;
  int bo_iterations = 10;
  int grid_per_dim = 41;
  int top_k = 5;
};

struct AnalyzeConfig {
  std::vector<std::string> group_a;
  std::vector<std::string> group_b;  // optional; enables the paired test
  std::string metric = "final_pseudo_regret";  // or mean_reward
  Statistic statistic = Statistic::mean;
};

/// One experiment definition; validates every nested invariant on parse and
/// rejects unknown keys with a JSON-path diagnostic.
struct ExperimentConfig {
  EnvironmentConfig environment;
  std::vector<NamedRunConfig> runs;
  std::optional<AcquisitionSpec> acquisition;
  GpHyperparams surrogate;
  ScalingParams scaling;
  int scaling_k_max = 64;
  AirfoilConfig airfoil;
  AnalyzeConfig analyze;
  BootstrapSpec bootstrap;
  int replicates = 1;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  static ExperimentConfig parse(const std::string& json_text);
  static ExperimentConfig load(const std::filesystem::path& path);
  std::string serialize() const;  // canonical JSON, round-trip stable

  void validate() const;

  /// Reference three-mode mixture over a 15-arm grid on [0, 1]; the default
  /// environment when a config omits the mixture block.
  static MixtureEnvConfig reference_mixture();
};

}  // namespace almab
