#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gibbs/errors.hpp"

namespace gibbs {

// Probabilities at or below this are exact zeros for support checks.
inline constexpr double kZeroProb = 1e-300;

class ProbVec {
 public:
  ProbVec() = default;
  // Validates (nonnegative, sums to 1 within 1e-12) and renormalizes.
  explicit ProbVec(std::vector<double> weights);
  // Rescales arbitrary nonnegative weights to sum 1.
  static ProbVec normalized(std::vector<double> weights);
  // From unnormalized log weights; -inf entries become zeros.
  static ProbVec from_log(std::vector<double> log_weights);
  static ProbVec uniform(std::size_t k);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  double log_at(std::size_t i) const { return lw_[i]; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<double>& log_weights() const { return lw_; }

 private:
  std::vector<double> w_;
  std::vector<double> lw_;
};

using CondTable = std::vector<ProbVec>;

class JointTable {
 public:
  JointTable() = default;
  JointTable(std::size_t rows, std::size_t cols, std::vector<double> entries);
  static JointTable from_log(std::size_t rows, std::size_t cols, std::vector<double> log_entries);
  // input ⊗ channel: entry (i, j) = input_i * rows[i]_j.
  static JointTable from_channel(const ProbVec& input, const CondTable& channel);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return p_[r * cols_ + c]; }
  double log_at(std::size_t r, std::size_t c) const { return lp_[r * cols_ + c]; }

  ProbVec row_marginal() const;
  ProbVec col_marginal() const;
  JointTable product() const;
  JointTable transpose() const;
  ProbVec flatten() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> p_, lp_;
};

struct InfoReport {
  double mutual = 0.0;
  double lautum = 0.0;
  double symmetrized = 0.0;
};

double kl_divergence(const ProbVec& p, const ProbVec& q);
double symmetrized_kl(const ProbVec& p, const ProbVec& q);
double renyi_divergence(const ProbVec& p, const ProbVec& q, double alpha);
double total_variation(const ProbVec& p, const ProbVec& q);

InfoReport info_triple(const JointTable& joint);
InfoReport conditional_info_triple(const std::vector<std::pair<double, JointTable>>& joints);

// I/L between the input X ~ input and Y ~ channel(X), evaluated term by term
// against the exact output marginal.
InfoReport channel_info(const ProbVec& input, const CondTable& channel);

// Output marginal of a channel, carried in log domain.
ProbVec channel_output(const ProbVec& input, const CondTable& channel);

// Per-term kernels in x = ln p - ln q with reference weight q.
//   x e^x - expm1(x): forward KL term
//   expm1(x) - x:     reverse KL term
double kl_forward_term(double x);
double kl_reverse_term(double x);
//   expm1(a x) - a expm1(x): Renyi term of order a, so that
//   sum p^a q^(1-a) - 1 = sum q renyi_term(x, a) when p << q
double renyi_term(double x, double alpha);

double log_sum_exp(const std::vector<double>& v);

}  // namespace gibbs
