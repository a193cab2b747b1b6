#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gibbs/stats.hpp"

namespace gibbs {

struct WellSample {
  Eigen::VectorXd w_star;
  Eigen::MatrixXd hessian;
  double weight = 1.0;
};

// Regularity conditions behind the MLE limit (documented, not checked):
// identifiable w*, interior point, twice continuously differentiable log f,
// finite I(w*), nonsingular J(w*), dominated third derivatives near w*.
struct MleSpec {
  Eigen::MatrixXd J;
  Eigen::MatrixXd fisher;
  int d = 1;
  double n = 1.0;
};

// Throws SingularHessian unless h is symmetric with LDL^T pivots above 1e-10 ||h||.
void require_positive_definite(const Eigen::MatrixXd& h, std::size_t sample);

// gamma -> infinity limit with W | S = s concentrated at W*(s).
double single_well_gen(const std::vector<WellSample>& samples);

// Average over wells of the single-well expression.
double multi_well_bound(const std::vector<std::vector<WellSample>>& wells);

double mle_asymptotic_gen(const MleSpec& spec);

// Scalar N(w, 1) model with log-loss, gamma = n, prior N(0, sigma0_sq).
struct BayesRegimeResult {
  McEstimate n_gen;
  double exact_n_gen = 0.0;
};

BayesRegimeResult bayes_regime_mc(int n, double sigma0_sq, double mu, long trials, std::uint64_t seed);

}  // namespace gibbs
