#include "almab/acquisition.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace almab {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

void AcquisitionSpec::validate() const {
  if (batch_size < 1) {
    throw InputError("AcquisitionSpec: batch_size must be >= 1");
  }
}

double expected_improvement(double mean, double variance, double best,
                            Direction direction) {
  if (variance < 0.0) throw InputError("expected_improvement: variance < 0");
  // Improvement over `best`: best - mean when minimizing, mean - best when
  // maximizing.
  const double gain =
      direction == Direction::minimize ? best - mean : mean - best;
  const double sd = std::sqrt(variance);
  if (sd == 0.0) return std::max(gain, 0.0);
  const double z = gain / sd;
  const double ei = gain * normal_cdf(z) + sd * normal_pdf(z);
  return std::max(ei, 0.0);
}

double mutual_information_score(double variance, double noise_var) {
  if (variance < 0.0) throw InputError("mutual_information_score: variance < 0");
  if (noise_var <= 0.0) {
    throw InputError("mutual_information_score: noise_var must be > 0");
  }
  return 0.5 * std::log1p(variance / noise_var);
}

std::vector<int> greedy_k_center(const std::vector<Candidate>& pool,
                                 const std::vector<Candidate>& labeled,
                                 int k) {
  if (k < 0) throw InputError("greedy_k_center: k must be >= 0");
  if (pool.empty() && k >= 1) throw InputError("greedy_k_center: empty pool");
  if (k > static_cast<int>(pool.size())) {
    throw InputError("greedy_k_center: k exceeds pool size");
  }

  // min distance from each pool point to the labeled set so far
  std::vector<double> min_dist(pool.size(),
                               std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (const auto& lab : labeled) {
      min_dist[i] =
          std::min(min_dist[i], (pool[i].coords - lab.coords).norm());
    }
  }

  std::vector<bool> taken(pool.size(), false);
  std::vector<int> picks;
  picks.reserve(static_cast<std::size_t>(k));
  for (int round = 0; round < k; ++round) {
    int pick;
    if (labeled.empty() && round == 0) {
      pick = 0;  // seeding rule
    } else {
      pick = -1;
      double best = -1.0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (taken[i]) continue;
        if (min_dist[i] > best) {
          best = min_dist[i];
          pick = static_cast<int>(i);
        }
      }
    }
    taken[static_cast<std::size_t>(pick)] = true;
    picks.push_back(pick);
    const auto& chosen = pool[static_cast<std::size_t>(pick)].coords;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      min_dist[i] = std::min(min_dist[i], (pool[i].coords - chosen).norm());
    }
  }
  return picks;
}

namespace detail {

std::vector<Candidate> rows_as_candidates(const Eigen::MatrixXd& rows) {
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out.push_back(Candidate{rows.row(i), -1});
  }
  return out;
}

std::vector<ScoredCandidate> rank_top(std::vector<ScoredCandidate> scored,
                                      int batch_size) {
  std::sort(scored.begin(), scored.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.pool_index < b.pool_index;
            });
  scored.resize(static_cast<std::size_t>(batch_size));
  return scored;
}

}  // namespace detail

}  // namespace almab
