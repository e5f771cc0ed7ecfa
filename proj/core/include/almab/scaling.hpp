#pragma once

#include <vector>

namespace almab {

struct ScalingParams {
  double serial_fraction = 0.1;  // p
  double efficiency = 1.0;       // constant eta for the Amdahl forms
  double comm_alpha = 0.01;      // alpha in eta(K) = 1 / (1 + alpha K^beta)
  double comm_beta = 0.5;        // beta in [0.5, 1], topology characteristics
  std::vector<double> task_costs = {1.0};

  double total_cost() const;
  void validate() const;
};

/// T_K = (1-p) sum C_i / (eta K) + p sum C_i.
double amdahl_time(int agents, const ScalingParams& params);

/// S(K) = 1 / (p + (1-p) / (eta K)); equals T_1 / T_K at constant eta.
double amdahl_speedup(int agents, const ScalingParams& params);

/// Scaled-workload speedup S_G(K) = p + (1-p) K.
double gustafson_speedup(int agents, const ScalingParams& params);

/// Communication-limited efficiency eta(K) = 1 / (1 + alpha K^beta).
double parallel_efficiency(int agents, const ScalingParams& params);

/// Communication-augmented wall-clock model minimized by the numeric K*:
/// T(K) = (1-p) C / K + p C (1 + alpha K^beta), continuous in K.
double comm_limited_time(double agents, const ScalingParams& params);

struct OptimalAgents {
  double closed_form = 0.0;  // ((1-p) / (alpha beta p))^(1 / (1+beta))
  double numeric = 0.0;      // golden-section argmin of comm_limited_time
};

/// Both routes to K*, reported side by side. Throws InputError when no finite
/// optimum exists (p in {0,1} or alpha = 0).
OptimalAgents optimal_agents(const ScalingParams& params);

}  // namespace almab
