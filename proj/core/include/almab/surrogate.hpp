#pragma once

#include <Eigen/Dense>
#include <vector>

#include "almab/env.hpp"

namespace almab {

struct GpHyperparams {
  double lengthscale = 0.2;
  double signal_var = 1.0;
  double noise_var = 1e-4;

  void validate() const;
};

/// s^2 * exp(-||a-b||^2 / (2 l^2)); symmetric, k(x,x) = s^2.
double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  double lengthscale, double signal_var);

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Zero-mean GP regression with RBF kernel. Immutable once fitted; safe to
/// share across threads. Cholesky uses jitter escalation (1e-10, 1e-8, 1e-6)
/// before giving up.
class GpModel {
 public:
  static GpModel fit(Eigen::MatrixXd inputs, Eigen::VectorXd outputs,
                     const GpHyperparams& hp);

  GpPrediction predict(const Eigen::VectorXd& x) const;
  /// Row-wise predictions; identical to pointwise predict per row.
  std::vector<GpPrediction> predict_batch(const Eigen::MatrixXd& queries) const;

  const Eigen::MatrixXd& train_inputs() const { return inputs_; }
  const Eigen::VectorXd& train_outputs() const { return outputs_; }
  const GpHyperparams& hyperparams() const { return hp_; }
  /// Lower factor L with L L' = K + (noise_var + jitter) I.
  const Eigen::MatrixXd& chol_factor() const { return chol_lower_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double noise_variance() const { return hp_.noise_var; }

 private:
  friend class StandardizedGp;
  GpModel() = default;

  Eigen::MatrixXd inputs_;
  Eigen::VectorXd outputs_;
  Eigen::MatrixXd chol_lower_;
  Eigen::VectorXd alpha_;
  GpHyperparams hp_;
};

/// Spec-named entry points.
GpModel gp_fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& outputs,
               const GpHyperparams& hp);
GpPrediction gp_predict(const GpModel& model, const Eigen::VectorXd& x);

/// GpModel behind fixed preprocessing: inputs mapped to the unit box of a
/// declared search domain, outputs standardized (mean 0, sd 1) inside fit and
/// de-standardized on predict. Hyperparameters are interpreted in the
/// transformed units. Used by the experiment pipelines; the raw GpModel is
/// the contract-level surface.
class StandardizedGp {
 public:
  static StandardizedGp fit(const Eigen::MatrixXd& inputs,
                            const Eigen::VectorXd& outputs,
                            const SearchBox& box, const GpHyperparams& hp);

  GpPrediction predict(const Eigen::VectorXd& x) const;
  std::vector<GpPrediction> predict_batch(const Eigen::MatrixXd& queries) const;

  /// Training data in original units.
  const Eigen::MatrixXd& train_inputs() const { return raw_inputs_; }
  const Eigen::VectorXd& train_outputs() const { return raw_outputs_; }
  /// Configured noise variance expressed in original output units.
  double noise_variance() const;

 private:
  StandardizedGp() = default;

  Eigen::VectorXd normalize(const Eigen::VectorXd& x) const;

  GpModel model_;
  Eigen::MatrixXd raw_inputs_;
  Eigen::VectorXd raw_outputs_;
  Eigen::VectorXd box_lower_;
  Eigen::VectorXd box_scale_;
  double out_mean_ = 0.0;
  double out_sd_ = 1.0;
};

}  // namespace almab
