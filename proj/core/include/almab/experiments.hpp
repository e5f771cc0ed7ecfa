#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "almab/config.hpp"
#include "almab/sched.hpp"

namespace almab {

/// Run-history CSV (schema almab.run_history.v1), byte-stable.
std::string render_run_csv(const RunHistory& history);

struct AirfoilDesign {
  double camber = 0.0;
  double thickness = 0.0;
  double drag = 0.0;          // GP posterior mean at the design
  double posterior_sd = 0.0;  // GP posterior sd at the design
};

struct AirfoilRun {
  std::vector<double> camber;    // evaluation history, init points first
  std::vector<double> thickness;
  std::vector<double> observed;  // noisy drag draws
  std::vector<AirfoilDesign> ranked;  // every evaluated design, best first
};

/// Surrogate-guided drag minimization: seeded Latin-hypercube initial points
/// followed by expected-improvement picks over a refreshed lattice.
AirfoilRun run_airfoil_bo(const DragSurfaceSpec& spec,
                          const AirfoilConfig& cfg, const GpHyperparams& hp,
                          std::uint64_t seed);

/// Experiment recipes behind the CLI subcommands. Each writes CSV/SVG
/// artifacts under out_dir and is deterministic given the config.
void cmd_simulate(const ExperimentConfig& config,
                  const std::filesystem::path& out_dir);
void cmd_compare(const ExperimentConfig& config,
                 const std::filesystem::path& out_dir);
void cmd_airfoil(const ExperimentConfig& config,
                 const std::filesystem::path& out_dir);
void cmd_scaling(const ExperimentConfig& config,
                 const std::filesystem::path& out_dir);
void cmd_analyze(const ExperimentConfig& config,
                 const std::filesystem::path& out_dir);

/// CLI front end shared by the binary and the tests. Returns the process
/// exit code: 0 ok, 2 config error, 3 numerical error, 4 I/O error.
int run_cli(const std::vector<std::string>& args);

}  // namespace almab
