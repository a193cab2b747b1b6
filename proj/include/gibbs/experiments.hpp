#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gibbs/asymptotics.hpp"
#include "gibbs/bounds.hpp"
#include "gibbs/engine.hpp"
#include "gibbs/gaussian.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/samplers.hpp"

namespace gibbs {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

bool all_passed(const std::vector<Check>& checks);

// Random finite problem: |Z| in [2, max_z], |W| in [2, max_w], n in [1, max_n],
// losses uniform on [0, 1], priors and data laws bounded away from zero.
LearningProblem random_problem(Rng& rng, bool iid, int max_z = 4, int max_w = 5, int max_n = 3);

struct IdentityRecord {
  std::size_t index = 0;
  double gamma = 0.0;
  bool iid = true;
  int n = 0, nz = 0, nw = 0;
  GenReport report;
  bool consistent = false;
  double max_rel_dev = 0.0;
  SandwichReport sandwich;
  double renyi_near_one_rel_gap = 0.0;  // (R_{1.01} - gen) / gen
  PropositionCompare prop;
  RatioConstants ratios;
  bool prop_ok = false;
  bool ck_le_ci = true;
};

struct IdentitySweep {
  std::vector<IdentityRecord> records;
  double seconds = 0.0;
};

// Instance i uses gammas[i % |gammas|]; IID and Joint models alternate in blocks of |gammas|.
IdentitySweep identity_sweep(std::size_t count, std::uint64_t seed,
                             const std::vector<double>& gammas = {0.1, 1.0, 10.0, 100.0},
                             const std::vector<double>& alphas = {1.5, 2.0, 4.0, 1.01});

std::vector<Check> identity_checks(const IdentitySweep& sweep, double renyi_near_one_tol = 0.02);

struct MonotonicitySweep {
  std::vector<std::vector<double>> curves;
  std::vector<bool> monotone;
};
MonotonicitySweep monotonicity_sweep(std::size_t count, std::uint64_t seed, const std::vector<double>& gammas);

struct ConcavitySweep {
  std::vector<ConcavityResult> results;
  double min_slack = 0.0;
};
ConcavitySweep concavity_sweep(std::size_t count, std::uint64_t seed, double gamma);

struct CounterexampleCase {
  double epsilon = 0.0;
  ChainRuleReport report;
};
std::vector<CounterexampleCase> counterexample_cases(const std::vector<double>& epsilons);

struct GaussianMcRow {
  GaussianMeanConfig cfg;
  MeanClosedForms closed;
  McEstimate mc;
  DataShape shape = DataShape::Gaussian;
  double z_score = 0.0;
};
std::vector<GaussianMeanConfig> default_gaussian_configs();
GaussianMcRow gaussian_mc_row(const GaussianMeanConfig& cfg, long trials, std::uint64_t seed, DataShape shape);

struct DecayPoint {
  int n = 0;
  double gen = 0.0;
  double ratio_to_double = 0.0;  // gen(n) / gen(2n)
};
std::vector<DecayPoint> decay_curve(GaussianMeanConfig base, const std::vector<int>& ns);

struct IsmiPoint {
  int n = 0;
  double gamma = 0.0;
  double gen = 0.0;
  IsmiBoundReport ismi;
  double ratio = 0.0;
};
struct IsmiScan {
  std::vector<IsmiPoint> points;
  double exponent = 0.0;  // least-squares slope of ln(ratio) on ln(n)
};
IsmiScan ismi_scan(GaussianMeanConfig base, const std::vector<int>& ns);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Laplace limit on the Gaussian mean problem: W*(s) = mean of s, H = 2 I.
struct LaplaceComparison {
  double gamma = 0.0;
  double exact_gen = 0.0;
  double laplace_gen = 0.0;
  double rel_gap = 0.0;
};
LaplaceComparison laplace_vs_exact(const GaussianMeanConfig& cfg, double gamma, long datasets, std::uint64_t seed);

struct AicCheck {
  int d = 0;
  double n = 0.0;
  double value = 0.0;
  double eigen_route = 0.0;  // sum of generalized eigenvalues of (fisher, J) over n
};
std::vector<AicCheck> aic_random_pairs(std::size_t count, std::uint64_t seed, double n);
MleSpec random_spd_pair(Rng& rng, int d, double n);

}  // namespace gibbs
