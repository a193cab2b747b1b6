#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "gibbs/rng.hpp"
#include "gibbs/stats.hpp"

namespace gibbs {

struct SgldConfig {
  double step = 1e-3;
  double gamma = 1.0;
  long iterations = 1000;
  long burn_in = 200;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  void validate() const;
  static SgldConfig with_default_burn_in(double step, double gamma, long iterations, std::uint64_t seed);
};

// grad(w, s) of the empirical risk; s holds one sample per row.
using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::MatrixXd&)>;

// Post-burn-in iterates, one per column.
Eigen::MatrixXd sgld_run(const Gradient& grad, const Eigen::VectorXd& initial, const SgldConfig& cfg,
                         const Eigen::MatrixXd& dataset);

// Quadratic L_e(w) = (w - m)^2 pooled over independent chains.
struct SgldMoments {
  double mean = 0.0;
  double mean_se = 0.0;  // between-chain standard error
  double variance = 0.0;
  double variance_se = 0.0;
  double target_variance = 0.0;   // 1/(2 gamma)
  double discrete_variance = 0.0; // 1/(2 gamma (1 - beta)), stationary law of the recursion
  long chains = 0;
  long kept_per_chain = 0;
};

SgldMoments sgld_quadratic_moments(double m, double gamma, double step, long iterations, long chains,
                                   std::uint64_t seed);

struct McModel {
  std::function<Eigen::MatrixXd(Rng&)> sample_dataset;
  std::function<Eigen::VectorXd(const Eigen::MatrixXd&, Rng&)> sample_posterior;
  std::function<Eigen::VectorXd(Rng&)> sample_point;
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> loss;
  int holdout = 8;
};

// Per trial: L_p from `holdout` fresh points minus L_e on the training set.
McEstimate mc_gen_error(const McModel& model, long trials, std::uint64_t seed);

}  // namespace gibbs
