#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gibbs/prob.hpp"

namespace gibbs {

inline constexpr double kDefaultEnumCap = 1e6;
inline constexpr double kDefaultCmiCap = 1e7;

struct IidData {
  ProbVec pz;
};

// Law over Z^n tuples in base-|Z| lexicographic order (first sample most significant).
struct JointData {
  ProbVec ps;
};

using DataModel = std::variant<IidData, JointData>;

struct LearningProblem {
  std::vector<std::string> samples;
  std::vector<std::string> hypotheses;
  Eigen::MatrixXd loss;  // |W| x |Z|
  ProbVec prior;
  DataModel data;
  int n = 1;

  std::size_t num_w() const { return static_cast<std::size_t>(loss.rows()); }
  std::size_t num_z() const { return static_cast<std::size_t>(loss.cols()); }
  bool iid() const { return std::holds_alternative<IidData>(data); }
  void validate() const;
};

struct Dataset {
  std::vector<int> z;
  double prob = 0.0;
  double log_prob = 0.0;
};

std::vector<Dataset> enumerate_datasets(const LearningProblem& problem, double cap = kDefaultEnumCap);

// Index of a tuple in the lexicographic enumeration.
std::size_t dataset_index(const std::vector<int>& z, std::size_t alphabet);

struct GibbsPosterior {
  double gamma = 0.0;
  CondTable rows;                    // one row per enumerated dataset
  std::vector<double> log_partition; // ln V(s, gamma)
};

// Enumerated problem: datasets, their law, and the empirical risk table.
struct Enumeration {
  std::vector<Dataset> datasets;
  ProbVec ps;
  Eigen::MatrixXd emp;  // |W| x |datasets|
  Eigen::VectorXd pop;  // population risk per hypothesis
};

Enumeration enumerate(const LearningProblem& problem, double cap = kDefaultEnumCap);

// Rows proportional to prior(w) exp(-gamma energy(w, s)).
GibbsPosterior gibbs_from_energy(const ProbVec& prior, const Eigen::MatrixXd& energy, double gamma);

GibbsPosterior gibbs_posterior(const LearningProblem& problem, double gamma, double cap = kDefaultEnumCap);

JointTable joint_distribution(const LearningProblem& problem, const GibbsPosterior& posterior);

double gen_error_direct(const LearningProblem& problem, const GibbsPosterior& posterior);

// E_{P_S}[E_{P_{W|S}}[L_p - L_e]] under an arbitrary dataset law with a fixed kernel.
double gen_under(const ProbVec& ps, const Eigen::MatrixXd& emp, const CondTable& rows);

struct GenReport {
  double direct = 0.0;
  double via_iskl = 0.0;
  double via_skl_div = 0.0;
  std::optional<double> via_cmi;
  std::optional<double> via_replace_one;
  InfoReport info;
};

struct CmiDetail {
  InfoReport info;  // I(W;U|S~), L(W;U|S~)
  double gen = 0.0; // 2 I_SKL(W;U|S~) / gamma
};

struct ReplaceOneDetail {
  std::vector<double> forward;  // D(P_{W|S} || P_{W|S^(i)} | P_{S,Z}) per i
  std::vector<double> reverse;  // D(P_{W|S^(i)} || P_{W|S} | P_{S,Z}) per i
  double gen = 0.0;             // sum_i (forward_i + reverse_i) / (2 gamma)
};

CmiDetail cmi_detail(const LearningProblem& problem, double gamma, double cap = kDefaultCmiCap);
ReplaceOneDetail replace_one_detail(const LearningProblem& problem, double gamma,
                                    double cap = kDefaultEnumCap);

struct CharacterizationOptions {
  bool cmi = true;
  bool replace_one = true;
  double cap = kDefaultEnumCap;
  double cmi_cap = kDefaultCmiCap;
};

// Fills via_cmi / via_replace_one for IID models that fit the caps.
GenReport gen_characterizations(const LearningProblem& problem, double gamma,
                                const CharacterizationOptions& opts = {});

// True when all populated fields agree with `direct` (1e-9 relative, 1e-12 absolute near 0).
bool report_consistent(const GenReport& r, double rel = 1e-9, double abs_tol = 1e-12);
bool agrees(double a, double reference, double rel = 1e-9, double abs_tol = 1e-12);

ProbVec population_gibbs(const LearningProblem& problem, double gamma);

struct Lemma1Sides {
  double under_marginal = 0.0;  // E_{P_W}[E_{P_S}[ln(Q/P_{W|S})]]
  double under_q = 0.0;         // E_{Q}[E_{P_S}[ln(Q/P_{W|S})]]
};
Lemma1Sides lemma1_condition(const LearningProblem& problem, double gamma, const ProbVec& q);

struct PropositionCompare {
  double mutual = 0.0, lautum = 0.0, d_fwd = 0.0, d_rev = 0.0;
  bool holds(double tol = 1e-10) const;
};
PropositionCompare proposition_compare(const LearningProblem& problem, double gamma);

struct RegularizedGenReport {
  double gen = 0.0;
  double iskl_over_gamma = 0.0;
  double reg_gap = 0.0;
  double lambda = 0.0;
  std::optional<double> trace_cov;  // tr Cov(W, T(S)) for the l2 regularizer
  bool consistent(double rel = 1e-9) const;
};

// regularizer: |W| x |datasets| in enumeration order.
RegularizedGenReport regularized_gen(const LearningProblem& problem, double gamma, double lambda,
                                     const Eigen::MatrixXd& regularizer);

// R(w, s) = ||embed(w) - target(s)||^2; embed is |W| x k, target |datasets| x k.
RegularizedGenReport regularized_gen_l2(const LearningProblem& problem, double gamma, double lambda,
                                        const Eigen::MatrixXd& embed, const Eigen::MatrixXd& target);

std::vector<double> empirical_risk_curve(const LearningProblem& problem, const std::vector<double>& gammas);

struct ConcavityResult {
  double gen_mixture = 0.0;
  double avg_gen = 0.0;
  std::vector<double> component_gen;
};
ConcavityResult concavity_probe(const LearningProblem& tmpl,
                                const std::vector<std::pair<double, DataModel>>& components,
                                double gamma);

struct ChainRuleReport {
  InfoReport w_z1, w_z2, w_z1z2;
  bool individual_sum_exceeds_joint = false;
};
ChainRuleReport chain_rule_example(double epsilon);

// Dataset law as a vector over the lexicographic enumeration.
ProbVec dataset_law(const DataModel& data, std::size_t alphabet, int n, double cap = kDefaultEnumCap);

}  // namespace gibbs
