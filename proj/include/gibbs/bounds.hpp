#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gibbs/engine.hpp"

namespace gibbs {

struct SubGaussian {
  double sigma;
};
struct SubExponential {
  double sigma_e_sq;
  double b;
};
struct SubGamma {
  double tau_sq;
  double c_s;
};

using TailClass = std::variant<SubGaussian, SubExponential, SubGamma>;

void validate_tail(const TailClass& tail);
std::string tail_name(const TailClass& tail);

double psi_star_inverse(const TailClass& tail, double y);

// Sub-Exponential branch point of psi*^{-1}.
double sub_exponential_branch(const SubExponential& t);

// Positive root of psi*^{-1}(k/n) - (1+c) k / gamma.
double fixed_point_kappa(const TailClass& tail, double gamma, double n, double c_ratio);
double fixed_point_kappa_bisect(const TailClass& tail, double gamma, double n, double c_ratio);

struct RatioConstants {
  double c_i = 0.0;
  double c_k = 0.0;
  double c_c = 0.0;
  double c_s_ratio = 0.0;
  bool degenerate = false;
  bool iid = false;
  // raw quantities behind the ratios
  double mutual = 0.0, lautum = 0.0, d_fwd = 0.0, d_rev = 0.0;
};

RatioConstants ratio_constants(const LearningProblem& problem, double gamma);

struct BoundEntry {
  std::string name;
  double value = 0.0;
  bool feasible = true;
  std::string regime;
  std::string constants_used;
};

struct SuiteInputs {
  double gamma = 1.0;
  double n = 1.0;
  TailClass tail = SubGaussian{1.0};
  RatioConstants ratios;
  std::optional<double> mutual_info;  // I(W;S), drives the sub-Exponential regime gate
  std::optional<double> tau;          // sub-Gaussian proxy under P_{W|S=s}
  std::optional<double> width;        // b - a for bounded losses
};

std::vector<BoundEntry> bound_suite(const SuiteInputs& in);

double tv_lower_bound(const LearningProblem& problem, double gamma);
double renyi_upper_bound(const LearningProblem& problem, double gamma, double alpha);
double kl_based_bound(const LearningProblem& problem, double gamma, double sigma);

struct SandwichReport {
  double gen = 0.0;
  double tv_lower = 0.0;
  std::vector<BoundEntry> upper;         // parametric bounds (feasible only on IID models)
  std::map<double, double> renyi;        // alpha -> bound
  bool lower_ok = true;
  bool upper_ok = true;
  bool renyi_ok = true;
};

// Bounded-loss sandwich with sigma = (b - a)/2 and exact ratio constants.
SandwichReport bounded_loss_sandwich(const LearningProblem& problem, double gamma,
                                     const std::vector<double>& alphas);

}  // namespace gibbs
