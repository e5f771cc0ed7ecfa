#include "almab/env.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "almab/errors.hpp"

namespace almab {

bool SearchBox::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lower.size()) return false;
  return (x.array() >= lower.array()).all() &&
         (x.array() <= upper.array()).all();
}

void SearchBox::validate() const {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw InputError("SearchBox: lower/upper dimension mismatch");
  }
  if ((lower.array() > upper.array()).any()) {
    throw InputError("SearchBox: lower > upper");
  }
}

MixtureSpec::MixtureSpec(std::vector<MixtureComponent> components,
                         double noise_sd)
    : components_(std::move(components)), noise_sd_(noise_sd) {
  if (components_.empty()) {
    throw InputError("MixtureSpec: at least one component required");
  }
  if (noise_sd_ < 0.0) throw InputError("MixtureSpec: noise_sd must be >= 0");

  dim_ = static_cast<int>(components_.front().mean.size());
  double weight_sum = 0.0;
  for (const auto& c : components_) {
    if (c.weight <= 0.0) throw InputError("MixtureSpec: weights must be > 0");
    weight_sum += c.weight;
    if (c.mean.size() != dim_ || c.cov.rows() != dim_ || c.cov.cols() != dim_) {
      throw InputError("MixtureSpec: component dimension mismatch");
    }
    const double scale = std::max(1.0, c.cov.cwiseAbs().maxCoeff());
    if ((c.cov - c.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw InputError("MixtureSpec: covariance not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
    if (llt.info() != Eigen::Success) {
      throw InputError("MixtureSpec: covariance not positive definite");
    }
    chol_lower_.push_back(llt.matrixL());
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) {
    throw InputError("MixtureSpec: weights must sum to 1");
  }
}

double MixtureSpec::mixture_value(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) {
    throw InputError("mixture_value: dimension mismatch");
  }
  double value = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Eigen::VectorXd diff = x - components_[i].mean;
    const double quad = chol_lower_[i]
                            .triangularView<Eigen::Lower>()
                            .solve(diff)
                            .squaredNorm();
    value += components_[i].weight * std::exp(-0.5 * quad);
  }
  return value;
}

double gaussian_mixture_reward(const Candidate& x, const MixtureSpec& spec,
                               Rng& rng) {
  const double mean = spec.mixture_value(x.coords);
  return mean + spec.noise_sd() * rng.normal();
}

double true_mixture_mean(const Candidate& x, const MixtureSpec& spec) {
  return spec.mixture_value(x.coords);
}

void DragSurfaceSpec::validate() const {
  if (curvature_c <= 0.0 || curvature_t <= 0.0) {
    throw InputError("DragSurfaceSpec: curvatures must be > 0");
  }
  if (base_drag <= 0.0) throw InputError("DragSurfaceSpec: base_drag must be > 0");
  if (noise_sd < 0.0) throw InputError("DragSurfaceSpec: noise_sd must be >= 0");
  if (eval_delay_ms < 0.0) {
    throw InputError("DragSurfaceSpec: eval_delay_ms must be >= 0");
  }
}

SearchBox DragSurfaceSpec::design_box() {
  SearchBox box;
  box.lower = Eigen::Vector2d(0.01, 0.05);
  box.upper = Eigen::Vector2d(0.1, 0.2);
  return box;
}

double true_drag(double camber, double thickness,
                 const DragSurfaceSpec& spec) {
  const double dc = camber - spec.camber_opt;
  const double dt = thickness - spec.thickness_opt;
  return spec.base_drag + spec.curvature_c * dc * dc +
         spec.curvature_t * dt * dt + spec.cross_term * dc * dt;
}

double mock_cfd_drag(double camber, double thickness,
                     const DragSurfaceSpec& spec, Rng& rng) {
  const SearchBox box = DragSurfaceSpec::design_box();
  if (camber < box.lower[0] || camber > box.upper[0] ||
      thickness < box.lower[1] || thickness > box.upper[1]) {
    throw InputError("mock_cfd_drag: design outside the parameter box");
  }
  if (spec.eval_delay_ms > 0.0) emulate_eval_cost(spec.eval_delay_ms);
  return true_drag(camber, thickness, spec) + spec.noise_sd * rng.normal();
}

std::vector<Candidate> uniform_grid(const SearchBox& box,
                                    const std::vector<int>& counts_per_dim) {
  box.validate();
  const int d = box.dimension();
  if (static_cast<int>(counts_per_dim.size()) != d) {
    throw InputError("uniform_grid: counts size must match dimension");
  }
  std::size_t total = 1;
  for (int c : counts_per_dim) {
    if (c < 1) throw InputError("uniform_grid: counts must be >= 1");
    total *= static_cast<std::size_t>(c);
  }
  std::vector<Candidate> grid;
  grid.reserve(total);
  std::vector<int> idx(d, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Eigen::VectorXd coords(d);
    for (int k = 0; k < d; ++k) {
      const int n = counts_per_dim[k];
      coords[k] = n == 1 ? box.lower[k]
                         : box.lower[k] + (box.upper[k] - box.lower[k]) *
                                              idx[k] / (n - 1);
    }
    grid.push_back(Candidate{coords, static_cast<int>(flat)});
    for (int k = d - 1; k >= 0; --k) {  // odometer, last dim fastest
      if (++idx[k] < counts_per_dim[k]) break;
      idx[k] = 0;
    }
  }
  return grid;
}

std::vector<Candidate> uniform_arm_grid(double lower, double upper, int arms) {
  SearchBox box;
  box.lower = Eigen::VectorXd::Constant(1, lower);
  box.upper = Eigen::VectorXd::Constant(1, upper);
  return uniform_grid(box, {arms});
}

std::vector<double> Environment::true_means() const {
  std::vector<double> means(static_cast<std::size_t>(arm_count()));
  for (int i = 0; i < arm_count(); ++i) means[i] = true_mean(i);
  return means;
}

int Environment::best_arm() const {
  if (arm_count() < 1) throw InputError("Environment: no arms");
  int best = 0;
  for (int i = 1; i < arm_count(); ++i) {
    if (true_mean(i) > true_mean(best)) best = i;
  }
  return best;
}

MixtureBanditEnv::MixtureBanditEnv(MixtureSpec spec,
                                   std::vector<Candidate> arms,
                                   double eval_cost_ms)
    : spec_(std::move(spec)),
      arms_(std::move(arms)),
      eval_cost_ms_(eval_cost_ms) {
  if (arms_.empty()) throw InputError("MixtureBanditEnv: empty arm grid");
  if (eval_cost_ms_ < 0.0) {
    throw InputError("MixtureBanditEnv: eval_cost_ms must be >= 0");
  }
  true_means_.reserve(arms_.size());
  for (const auto& a : arms_) {
    true_means_.push_back(spec_.mixture_value(a.coords));
  }
}

const Candidate& MixtureBanditEnv::arm(int index) const {
  if (index < 0 || index >= arm_count()) {
    throw InputError("MixtureBanditEnv: arm index out of range");
  }
  return arms_[static_cast<std::size_t>(index)];
}

double MixtureBanditEnv::evaluate(int arm_index, Rng& rng) const {
  const Candidate& c = arm(arm_index);
  if (eval_cost_ms_ > 0.0) emulate_eval_cost(eval_cost_ms_);
  return gaussian_mixture_reward(c, spec_, rng);
}

double MixtureBanditEnv::true_mean(int arm_index) const {
  if (arm_index < 0 || arm_index >= arm_count()) {
    throw InputError("MixtureBanditEnv: arm index out of range");
  }
  return true_means_[static_cast<std::size_t>(arm_index)];
}

void emulate_eval_cost(double ms) {
  std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(ms));
}

}  // namespace almab
