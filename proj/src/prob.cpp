#include "gibbs/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gibbs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > kZeroProb ? std::log(v) : kNegInf; }

std::vector<double> logs_of(const std::vector<double>& w) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = safe_log(w[i]);
  return out;
}

void check_entries(const std::vector<double>& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0)
      throw InvalidDistribution("weight " + std::to_string(i) + " is negative or not finite");
  }
}

// Pairwise sum keeps reductions order-fixed and accurate.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double sum_of(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

void same_size(const ProbVec& p, const ProbVec& q) {
  if (p.size() != q.size()) throw AlphabetMismatch(p.size(), q.size());
}

}  // namespace

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  std::vector<double> e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) e[i] = std::exp(v[i] - m);
  return m + std::log(sum_of(e));
}

double kl_forward_term(double x) {
  if (x == kNegInf) return 1.0;
  if (std::fabs(x) < 0.1) {
    // sum_k (k-1)/k! x^k
    double x2 = x * x;
    return x2 * (1.0 / 2 + x * (1.0 / 3 + x * (1.0 / 8 + x * (1.0 / 30 + x * (1.0 / 144 +
           x * (1.0 / 840 + x * (1.0 / 5760 + x * (1.0 / 45360 + x * (1.0 / 403200)))))))));
  }
  return x * std::exp(x) - std::expm1(x);
}

double kl_reverse_term(double x) {
  if (std::fabs(x) < 0.1) {
    double x2 = x * x;
    return x2 * (1.0 / 2 + x * (1.0 / 6 + x * (1.0 / 24 + x * (1.0 / 120 + x * (1.0 / 720 +
           x * (1.0 / 5040 + x * (1.0 / 40320 + x * (1.0 / 362880 + x * (1.0 / 3628800)))))))));
  }
  return std::expm1(x) - x;
}

ProbVec::ProbVec(std::vector<double> weights) {
  check_entries(weights);
  double s = sum_of(weights);
  if (std::fabs(s - 1.0) > 1e-12)
    throw InvalidDistribution("weights sum to " + std::to_string(s) + ", not 1");
  for (double& v : weights) v /= s;
  lw_ = logs_of(weights);
  w_ = std::move(weights);
}

ProbVec ProbVec::normalized(std::vector<double> weights) {
  check_entries(weights);
  double s = sum_of(weights);
  if (!(s > 0.0)) throw InvalidDistribution("weights have zero total mass");
  for (double& v : weights) v /= s;
  return ProbVec(std::move(weights));
}

ProbVec ProbVec::from_log(std::vector<double> log_weights) {
  for (double v : log_weights)
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw InvalidDistribution("log weight is NaN or +inf");
  double z = log_sum_exp(log_weights);
  if (z == kNegInf) throw InvalidDistribution("log weights have zero total mass");
  ProbVec out;
  out.w_.resize(log_weights.size());
  out.lw_.resize(log_weights.size());
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    double l = log_weights[i] - z;
    double w = std::exp(l);
    out.w_[i] = w > kZeroProb ? w : 0.0;
    out.lw_[i] = w > kZeroProb ? l : kNegInf;
  }
  return out;
}

ProbVec ProbVec::uniform(std::size_t k) {
  if (k == 0) throw InvalidDistribution("empty alphabet");
  return from_log(std::vector<double>(k, 0.0));
}

JointTable::JointTable(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols) {
  if (entries.size() != rows * cols) throw AlphabetMismatch(entries.size(), rows * cols);
  ProbVec flat(std::move(entries));
  p_ = flat.weights();
  lp_ = flat.log_weights();
}

JointTable JointTable::from_log(std::size_t rows, std::size_t cols, std::vector<double> log_entries) {
  if (log_entries.size() != rows * cols) throw AlphabetMismatch(log_entries.size(), rows * cols);
  ProbVec flat = ProbVec::from_log(std::move(log_entries));
  JointTable t;
  t.rows_ = rows;
  t.cols_ = cols;
  t.p_ = flat.weights();
  t.lp_ = flat.log_weights();
  return t;
}

JointTable JointTable::from_channel(const ProbVec& input, const CondTable& channel) {
  if (channel.size() != input.size()) throw AlphabetMismatch(channel.size(), input.size());
  std::size_t cols = channel.empty() ? 0 : channel[0].size();
  std::vector<double> lp(input.size() * cols);
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (channel[i].size() != cols) throw AlphabetMismatch(channel[i].size(), cols);
    for (std::size_t j = 0; j < cols; ++j) lp[i * cols + j] = input.log_at(i) + channel[i].log_at(j);
  }
  return from_log(input.size(), cols, std::move(lp));
}

ProbVec JointTable::row_marginal() const {
  std::vector<double> lm(rows_);
  std::vector<double> buf(cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) buf[c] = lp_[r * cols_ + c];
    lm[r] = log_sum_exp(buf);
  }
  return ProbVec::from_log(std::move(lm));
}

ProbVec JointTable::col_marginal() const { return transpose().row_marginal(); }

JointTable JointTable::transpose() const {
  std::vector<double> lt(p_.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) lt[c * rows_ + r] = lp_[r * cols_ + c];
  return from_log(cols_, rows_, std::move(lt));
}

JointTable JointTable::product() const {
  ProbVec a = row_marginal(), b = col_marginal();
  std::vector<double> lq(p_.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) lq[r * cols_ + c] = a.log_at(r) + b.log_at(c);
  return from_log(rows_, cols_, std::move(lq));
}

ProbVec JointTable::flatten() const { return ProbVec::from_log(lp_); }

double kl_divergence(const ProbVec& p, const ProbVec& q) {
  same_size(p, q);
  std::vector<double> terms(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool pz = p[i] <= kZeroProb, qz = q[i] <= kZeroProb;
    if (qz && !pz) throw AbsoluteContinuityViolation(i, "");
    if (qz) continue;
    terms[i] = pz ? q[i] : q[i] * kl_forward_term(p.log_at(i) - q.log_at(i));
  }
  return std::max(0.0, sum_of(terms));
}

double symmetrized_kl(const ProbVec& p, const ProbVec& q) {
  same_size(p, q);
  std::vector<double> terms(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool pz = p[i] <= kZeroProb, qz = q[i] <= kZeroProb;
    if (pz && qz) continue;
    if (pz != qz) throw AbsoluteContinuityViolation(i, pz ? "reverse" : "forward");
    double x = p.log_at(i) - q.log_at(i);
    terms[i] = q[i] * x * std::expm1(x);
  }
  return std::max(0.0, sum_of(terms));
}

double renyi_term(double x, double alpha) {
  if (x == -std::numeric_limits<double>::infinity()) return alpha - 1.0;
  double scale = std::fabs(x) * std::max(1.0, alpha);
  if (scale >= 0.5) return std::expm1(alpha * x) - alpha * std::expm1(x);
  // sum_{k>=2} (a^k - a) x^k / k!, with a^k - a = a expm1((k-1) ln a)
  double la = std::log(alpha), xk = x, sum = 0.0;
  for (int k = 2; k < 60; ++k) {
    xk *= x / k;
    double t = alpha * std::expm1((k - 1) * la) * xk;
    sum += t;
    if (std::fabs(t) <= 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

double renyi_divergence(const ProbVec& p, const ProbVec& q, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) throw AlphaOutOfRange(alpha);
  same_size(p, q);
  // ln sum q e^{a x} = log1p(sum q renyi_term(x) - a * mass of p off supp q)
  std::vector<double> terms(p.size(), 0.0);
  double off = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool pz = p[i] <= kZeroProb, qz = q[i] <= kZeroProb;
    if (pz && qz) continue;
    if (qz) {
      if (alpha > 1.0) throw AbsoluteContinuityViolation(i, "");
      off += p[i];
      continue;
    }
    double x = pz ? -std::numeric_limits<double>::infinity() : p.log_at(i) - q.log_at(i);
    terms[i] = q[i] * renyi_term(x, alpha);
  }
  double s = sum_of(terms) - alpha * off;
  if (s <= -1.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, std::log1p(s) / (alpha - 1.0));
}

double total_variation(const ProbVec& p, const ProbVec& q) {
  same_size(p, q);
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) terms[i] = std::fabs(p[i] - q[i]);
  return sum_of(terms);
}

ProbVec channel_output(const ProbVec& input, const CondTable& channel) {
  if (channel.size() != input.size()) throw AlphabetMismatch(channel.size(), input.size());
  if (channel.empty()) throw InvalidDistribution("empty channel");
  std::size_t k = channel[0].size();
  std::vector<double> out(k);
  std::vector<double> buf(input.size());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < input.size(); ++i) {
      if (channel[i].size() != k) throw AlphabetMismatch(channel[i].size(), k);
      buf[i] = input.log_at(i) + channel[i].log_at(j);
    }
    out[j] = log_sum_exp(buf);
  }
  return ProbVec::from_log(std::move(out));
}

InfoReport channel_info(const ProbVec& input, const CondTable& channel) {
  ProbVec out = channel_output(input, channel);
  std::size_t k = out.size();
  std::vector<double> ti(input.size() * k, 0.0), tl(input.size() * k, 0.0);
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] <= kZeroProb) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (out[j] <= kZeroProb) continue;
      double q = input[i] * out[j];
      if (channel[i][j] <= kZeroProb) {
        throw AbsoluteContinuityViolation(i * k + j, "lautum");
      }
      double x = channel[i].log_at(j) - out.log_at(j);
      ti[i * k + j] = q * kl_forward_term(x);
      tl[i * k + j] = q * kl_reverse_term(x);
    }
  }
  InfoReport r;
  r.mutual = std::max(0.0, sum_of(ti));
  r.lautum = std::max(0.0, sum_of(tl));
  r.symmetrized = r.mutual + r.lautum;
  return r;
}

InfoReport info_triple(const JointTable& joint) {
  ProbVec a = joint.row_marginal(), b = joint.col_marginal();
  std::size_t n = joint.rows() * joint.cols();
  std::vector<double> ti(n, 0.0), tl(n, 0.0);
  for (std::size_t r = 0; r < joint.rows(); ++r) {
    for (std::size_t c = 0; c < joint.cols(); ++c) {
      std::size_t idx = r * joint.cols() + c;
      bool qz = a[r] <= kZeroProb || b[c] <= kZeroProb;
      bool pz = joint(r, c) <= kZeroProb;
      if (qz) {
        if (!pz) throw AbsoluteContinuityViolation(idx, "mutual");
        continue;
      }
      if (pz) throw AbsoluteContinuityViolation(idx, "lautum");
      double q = a[r] * b[c];
      double x = joint.log_at(r, c) - a.log_at(r) - b.log_at(c);
      ti[idx] = q * kl_forward_term(x);
      tl[idx] = q * kl_reverse_term(x);
    }
  }
  InfoReport out;
  out.mutual = std::max(0.0, sum_of(ti));
  out.lautum = std::max(0.0, sum_of(tl));
  out.symmetrized = out.mutual + out.lautum;
  return out;
}

InfoReport conditional_info_triple(const std::vector<std::pair<double, JointTable>>& joints) {
  std::vector<double> w;
  for (const auto& j : joints) w.push_back(j.first);
  ProbVec weights(w);
  std::vector<double> ti(joints.size()), tl(joints.size());
  for (std::size_t k = 0; k < joints.size(); ++k) {
    if (weights[k] <= kZeroProb) {
      ti[k] = tl[k] = 0.0;
      continue;
    }
    InfoReport r;
    try {
      r = info_triple(joints[k].second);
    } catch (const AbsoluteContinuityViolation& e) {
      throw AbsoluteContinuityViolation(e.index(), e.direction() + ", condition " + std::to_string(k));
    }
    ti[k] = weights[k] * r.mutual;
    tl[k] = weights[k] * r.lautum;
  }
  InfoReport out;
  out.mutual = sum_of(ti);
  out.lautum = sum_of(tl);
  out.symmetrized = out.mutual + out.lautum;
  return out;
}

}  // namespace gibbs
