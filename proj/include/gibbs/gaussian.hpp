#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "gibbs/stats.hpp"

namespace gibbs {

struct GaussianMeanConfig {
  int d = 1;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(1);
  double sigma0_sq = 1.0;
  double sigmaZ_sq = 1.0;
  double sigma_sq = 1.0;
  int n = 10;

  double gamma() const { return n / (2.0 * sigma_sq); }
  double sigma1_sq() const { return sigma0_sq * sigma_sq / (n * sigma0_sq + sigma_sq); }
  // sigmaZ_sq = 0 is accepted (degenerate data law); other variances must be > 0.
  void validate() const;
};

// Y = A X + N, X ~ N(0, Sigma), N ~ N(0, SigmaN).
struct GaussianChannel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd Sigma;
  Eigen::MatrixXd SigmaN;
};

struct ChannelInfo {
  double mutual = 0.0;
  double lautum = 0.0;
};

double gaussian_kl(const Eigen::VectorXd& m0, const Eigen::MatrixXd& s0,
                   const Eigen::VectorXd& m1, const Eigen::MatrixXd& s1);

ChannelInfo gaussian_channel_info(const GaussianChannel& channel);

struct MeanClosedForms {
  double sigma1_sq = 0.0;
  double gen = 0.0;
  double mutual = 0.0;
  double lautum = 0.0;
  double iskl = 0.0;
};

MeanClosedForms mean_closed_forms(const GaussianMeanConfig& cfg);

enum class DataShape { Gaussian, TwoPoint };

McEstimate mc_mean_gen(const GaussianMeanConfig& cfg, long trials, std::uint64_t seed,
                       DataShape shape = DataShape::Gaussian);

struct IsmiBoundReport {
  double per_sample_mi = 0.0;
  double sigma_ell_sq = 0.0;
  double eta = 0.0;
  double bound = 0.0;
  bool dominates_gen = false;
};

IsmiBoundReport ismi_bound(const GaussianMeanConfig& cfg);

struct PacBayesInputs {
  double sigma = 1.0;
  double gamma = 1.0;
  double n = 1.0;
  double prime_shift = 0.0;  // D(P_Z' || P_Z)
  double delta = 0.05;
  double c_p = 0.0;
};

double pac_bayes_epsilon(double sigma, double n, double delta);
double pac_bayes_bound(const PacBayesInputs& in);
double pac_bayes_bound(const GaussianMeanConfig& cfg, double sigma, double prime_shift, double delta, double c_p);

// Truncated squared loss min((w - z)^2, cap) on a 1-D hypothesis grid.
struct PacCoverageConfig {
  double mu = 0.0;
  double sigmaZ_sq = 1.0;
  int n = 50;
  double gamma = 25.0;
  double cap = 4.0;
  double grid_lo = -3.0;
  double grid_hi = 3.0;
  int grid_points = 101;
};

// E_{z ~ N(mu, s2)}[min((w - z)^2, cap)]
double truncated_sq_population_risk(double w, double mu, double sigmaZ_sq, double cap);

struct PacCoverage {
  double delta = 0.0;
  long trials = 0;
  double coverage = 0.0;
  double mean_bound = 0.0;
  double mean_gap = 0.0;
  double mean_c_p = 0.0;
};

PacCoverage pac_bayes_coverage(const PacCoverageConfig& cfg, double delta, long trials, std::uint64_t seed);

}  // namespace gibbs
