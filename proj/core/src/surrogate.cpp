#include "almab/surrogate.hpp"

#include <algorithm>
#include <cmath>

#include "almab/errors.hpp"

namespace almab {

void GpHyperparams::validate() const {
  if (lengthscale <= 0.0) throw InputError("GpHyperparams: lengthscale must be > 0");
  if (signal_var <= 0.0) throw InputError("GpHyperparams: signal_var must be > 0");
  if (noise_var < 0.0) throw InputError("GpHyperparams: noise_var must be >= 0");
}

double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  double lengthscale, double signal_var) {
  if (a.size() != b.size()) throw InputError("rbf_kernel: dimension mismatch");
  if (lengthscale <= 0.0) throw InputError("rbf_kernel: lengthscale must be > 0");
  const double d2 = (a - b).squaredNorm();
  return signal_var * std::exp(-0.5 * d2 / (lengthscale * lengthscale));
}

GpModel GpModel::fit(Eigen::MatrixXd inputs, Eigen::VectorXd outputs,
                     const GpHyperparams& hp) {
  hp.validate();
  const Eigen::Index n = inputs.rows();
  if (n < 1) throw InputError("gp_fit: at least one training point required");
  if (outputs.size() != n) {
    throw InputError("gp_fit: inputs/outputs size mismatch");
  }

  if (hp.noise_var == 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (inputs.row(i) == inputs.row(j)) {
          throw NumericalError(
              "gp_fit: duplicate training inputs with zero noise make the "
              "kernel matrix singular");
        }
      }
    }
  }

  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = hp.signal_var;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k =
          rbf_kernel(inputs.row(i), inputs.row(j), hp.lengthscale, hp.signal_var);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }

  const double jitters[] = {0.0, 1e-10, 1e-8, 1e-6};
  Eigen::LLT<Eigen::MatrixXd> llt;
  bool ok = false;
  for (double jitter : jitters) {
    Eigen::MatrixXd regularized = gram;
    regularized.diagonal().array() += hp.noise_var + jitter;
    llt.compute(regularized);
    if (llt.info() == Eigen::Success) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    throw NumericalError(
        "gp_fit: Cholesky failed after jitter escalation (n=" +
        std::to_string(n) + ", lengthscale=" + std::to_string(hp.lengthscale) +
        ", noise_var=" + std::to_string(hp.noise_var) + ")");
  }

  GpModel model;
  model.inputs_ = std::move(inputs);
  model.outputs_ = std::move(outputs);
  model.hp_ = hp;
  model.chol_lower_ = llt.matrixL();
  model.alpha_ = llt.solve(model.outputs_);
  return model;
}

GpPrediction GpModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != inputs_.cols()) {
    throw InputError("gp_predict: query dimension mismatch");
  }
  const Eigen::Index n = inputs_.rows();
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k_star[i] = rbf_kernel(inputs_.row(i), x, hp_.lengthscale, hp_.signal_var);
  }
  const double mean = k_star.dot(alpha_);
  const Eigen::VectorXd v =
      chol_lower_.triangularView<Eigen::Lower>().solve(k_star);
  const double variance = std::max(hp_.signal_var - v.squaredNorm(), 0.0);
  return {mean, variance};
}

std::vector<GpPrediction> GpModel::predict_batch(
    const Eigen::MatrixXd& queries) const {
  std::vector<GpPrediction> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out.push_back(predict(Eigen::VectorXd(queries.row(i))));
  }
  return out;
}

GpModel gp_fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& outputs,
               const GpHyperparams& hp) {
  return GpModel::fit(inputs, outputs, hp);
}

GpPrediction gp_predict(const GpModel& model, const Eigen::VectorXd& x) {
  return model.predict(x);
}

StandardizedGp StandardizedGp::fit(const Eigen::MatrixXd& inputs,
                                   const Eigen::VectorXd& outputs,
                                   const SearchBox& box,
                                   const GpHyperparams& hp) {
  box.validate();
  if (inputs.cols() != box.dimension()) {
    throw InputError("StandardizedGp: box dimension mismatch");
  }
  const Eigen::Index n = inputs.rows();
  if (n < 1) throw InputError("StandardizedGp: empty training set");
  if (outputs.size() != n) {
    throw InputError("StandardizedGp: inputs/outputs size mismatch");
  }

  StandardizedGp sgp;
  sgp.raw_inputs_ = inputs;
  sgp.raw_outputs_ = outputs;
  sgp.box_lower_ = box.lower;
  sgp.box_scale_ = (box.upper - box.lower).cwiseMax(1e-12);

  sgp.out_mean_ = outputs.mean();
  const double var =
      (outputs.array() - sgp.out_mean_).square().sum() / static_cast<double>(n);
  const double sd = std::sqrt(var);
  sgp.out_sd_ = sd > 1e-12 ? sd : 1.0;

  Eigen::MatrixXd norm_inputs(n, inputs.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    norm_inputs.row(i) = sgp.normalize(inputs.row(i));
  }
  Eigen::VectorXd std_outputs =
      (outputs.array() - sgp.out_mean_) / sgp.out_sd_;
  sgp.model_ = GpModel::fit(std::move(norm_inputs), std::move(std_outputs), hp);
  return sgp;
}

Eigen::VectorXd StandardizedGp::normalize(const Eigen::VectorXd& x) const {
  return (x - box_lower_).cwiseQuotient(box_scale_);
}

GpPrediction StandardizedGp::predict(const Eigen::VectorXd& x) const {
  const GpPrediction p = model_.predict(normalize(x));
  return {p.mean * out_sd_ + out_mean_, p.variance * out_sd_ * out_sd_};
}

std::vector<GpPrediction> StandardizedGp::predict_batch(
    const Eigen::MatrixXd& queries) const {
  std::vector<GpPrediction> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out.push_back(predict(Eigen::VectorXd(queries.row(i))));
  }
  return out;
}

double StandardizedGp::noise_variance() const {
  return model_.noise_variance() * out_sd_ * out_sd_;
}

}  // namespace almab
