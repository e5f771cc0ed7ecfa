#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "almab/rng.hpp"

namespace almab {

/// Axis-aligned search domain.
struct SearchBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::VectorXd& x) const;
  void validate() const;
};

/// A point in the search box. arm_id indexes the discretized arm grid and is
/// -1 for continuous-search candidates.
struct Candidate {
  Eigen::VectorXd coords;
  int arm_id = -1;
};

struct MixtureComponent {
  double weight = 1.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Gaussian-mixture reward surface: sum_i w_i exp(-0.5 (x-mu_i)' Sigma_i^-1
/// (x-mu_i)) plus N(0, sigma^2) noise. Weights must be positive and sum to 1;
/// every covariance must be symmetric positive definite.
class MixtureSpec {
 public:
  MixtureSpec(std::vector<MixtureComponent> components, double noise_sd);

  int dimension() const { return dim_; }
  double noise_sd() const { return noise_sd_; }
  const std::vector<MixtureComponent>& components() const {
    return components_;
  }

  /// Noiseless mixture value at x.
  double mixture_value(const Eigen::VectorXd& x) const;

 private:
  std::vector<MixtureComponent> components_;
  std::vector<Eigen::MatrixXd> chol_lower_;  // cached factors of each cov
  double noise_sd_ = 0.0;
  int dim_ = 0;
};

/// One noisy evaluation; advances rng by exactly one normal draw.
double gaussian_mixture_reward(const Candidate& x, const MixtureSpec& spec,
                               Rng& rng);

/// Noiseless expected reward at x (independent of noise_sd).
double true_mixture_mean(const Candidate& x, const MixtureSpec& spec);

/// Quadratic drag surface calibrated so its minimum sits in the top-design
/// cluster (camber ~0.075, thickness ~0.14, drag ~0.087).
struct DragSurfaceSpec {
  double camber_opt = 0.075;
  double thickness_opt = 0.14;
  double base_drag = 0.087;
  double curvature_c = 2.0;
  double curvature_t = 0.8;
  double cross_term = 0.3;
  double noise_sd = 5e-4;
  double eval_delay_ms = 0.0;  // sleep per evaluation when > 0

  void validate() const;
  /// Design domain: camber in [0.01, 0.1], thickness in [0.05, 0.2].
  static SearchBox design_box();
};

/// Noiseless drag value.
double true_drag(double camber, double thickness, const DragSurfaceSpec& spec);

/// Noisy drag evaluation; sleeps eval_delay_ms when configured.
double mock_cfd_drag(double camber, double thickness,
                     const DragSurfaceSpec& spec, Rng& rng);

/// Uniform lattice over the box, counts_per_dim points per dimension
/// (endpoints included). arm_id is set to the flat index.
std::vector<Candidate> uniform_grid(const SearchBox& box,
                                    const std::vector<int>& counts_per_dim);

/// Convenience 1-D arm grid.
std::vector<Candidate> uniform_arm_grid(double lower, double upper, int arms);

/// Bandit-facing environment: a fixed arm set plus noisy evaluation.
/// Evaluation is a pure function of (arm, rng state); generators are never
/// shared, so concurrent calls with distinct rngs are safe.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int arm_count() const = 0;
  virtual const Candidate& arm(int index) const = 0;
  virtual double evaluate(int arm, Rng& rng) const = 0;
  virtual double true_mean(int arm) const = 0;
  /// Modeled cost of one evaluation; also the sleep duration when emulation
  /// is enabled.
  virtual double eval_cost_ms() const = 0;

  std::vector<double> true_means() const;
  /// Arm with the highest true mean, ties broken by lowest index.
  int best_arm() const;
};

class MixtureBanditEnv final : public Environment {
 public:
  MixtureBanditEnv(MixtureSpec spec, std::vector<Candidate> arms,
                   double eval_cost_ms = 0.0);

  int arm_count() const override { return static_cast<int>(arms_.size()); }
  const Candidate& arm(int index) const override;
  double evaluate(int arm, Rng& rng) const override;
  double true_mean(int arm) const override;
  double eval_cost_ms() const override { return eval_cost_ms_; }

  const MixtureSpec& spec() const { return spec_; }

 private:
  MixtureSpec spec_;
  std::vector<Candidate> arms_;
  std::vector<double> true_means_;
  double eval_cost_ms_ = 0.0;
};

/// Sleep helper shared by cost-emulating environments.
void emulate_eval_cost(double ms);

}  // namespace almab
