#include "almab/scaling.hpp"

#include <cmath>

#include "almab/errors.hpp"

namespace almab {

double ScalingParams::total_cost() const {
  double total = 0.0;
  for (double c : task_costs) total += c;
  return total;
}

void ScalingParams::validate() const {
  if (serial_fraction < 0.0 || serial_fraction > 1.0) {
    throw InputError("ScalingParams: serial_fraction must be in [0, 1]");
  }
  if (efficiency <= 0.0 || efficiency > 1.0) {
    throw InputError("ScalingParams: efficiency must be in (0, 1]");
  }
  if (comm_alpha < 0.0) throw InputError("ScalingParams: comm_alpha must be >= 0");
  if (comm_beta < 0.5 || comm_beta > 1.0) {
    throw InputError("ScalingParams: comm_beta must be in [0.5, 1]");
  }
  if (task_costs.empty()) throw InputError("ScalingParams: no task costs");
  for (double c : task_costs) {
    if (c <= 0.0) throw InputError("ScalingParams: task costs must be > 0");
  }
}

double amdahl_time(int agents, const ScalingParams& params) {
  params.validate();
  if (agents < 1) throw InputError("amdahl_time: agents must be >= 1");
  const double total = params.total_cost();
  const double p = params.serial_fraction;
  return (1.0 - p) * total / (params.efficiency * agents) + p * total;
}

double amdahl_speedup(int agents, const ScalingParams& params) {
  params.validate();
  if (agents < 1) throw InputError("amdahl_speedup: agents must be >= 1");
  const double p = params.serial_fraction;
  return 1.0 / (p + (1.0 - p) / (params.efficiency * agents));
}

double gustafson_speedup(int agents, const ScalingParams& params) {
  params.validate();
  if (agents < 1) throw InputError("gustafson_speedup: agents must be >= 1");
  const double p = params.serial_fraction;
  return p + (1.0 - p) * agents;
}

double parallel_efficiency(int agents, const ScalingParams& params) {
  params.validate();
  if (agents < 1) throw InputError("parallel_efficiency: agents must be >= 1");
  return 1.0 /
         (1.0 + params.comm_alpha * std::pow(agents, params.comm_beta));
}

double comm_limited_time(double agents, const ScalingParams& params) {
  const double total = params.total_cost();
  const double p = params.serial_fraction;
  return (1.0 - p) * total / agents +
         p * total * (1.0 + params.comm_alpha * std::pow(agents, params.comm_beta));
}

OptimalAgents optimal_agents(const ScalingParams& params) {
  params.validate();
  const double p = params.serial_fraction;
  const double alpha = params.comm_alpha;
  const double beta = params.comm_beta;
  if (p <= 0.0 || p >= 1.0 || alpha <= 0.0) {
    throw InputError(
        "optimal_agents: no finite optimum (requires p in (0,1) and alpha > 0)");
  }

  OptimalAgents result;
  result.closed_form =
      std::pow((1.0 - p) / (alpha * beta * p), 1.0 / (1.0 + beta));

  // golden-section search in log K; comm_limited_time is unimodal on [1, 1e6]
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;                 // log(1)
  double hi = std::log(1e6);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = comm_limited_time(std::exp(x1), params);
  double f2 = comm_limited_time(std::exp(x2), params);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = comm_limited_time(std::exp(x1), params);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = comm_limited_time(std::exp(x2), params);
    }
  }
  result.numeric = std::exp(0.5 * (lo + hi));
  return result;
}

}  // namespace almab
