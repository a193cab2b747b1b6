#include "gibbs/gaussian.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/parallel.hpp"
#include "gibbs/prob.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

namespace {

constexpr int kMaxDim = 64;

void require_spd(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) throw NotPositiveDefinite(std::string(what) + " is not square");
  if (m.rows() > kMaxDim) throw ConfigInvalid(what, "dimension exceeds 64");
  if (!m.isApprox(m.transpose(), 1e-12)) throw NotPositiveDefinite(std::string(what) + " is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(std::string(what) + " is not positive definite");
}

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

void GaussianMeanConfig::validate() const {
  if (d < 1 || d > kMaxDim) throw ConfigInvalid("d", "must lie in [1, 64]");
  if (n < 1) throw ConfigInvalid("n", "must be >= 1");
  if (mu.size() != d || mu0.size() != d) throw ConfigInvalid("mu", "length must equal d");
  if (!(sigma0_sq > 0.0)) throw ConfigInvalid("sigma0_sq", "must be > 0");
  if (!(sigma_sq > 0.0)) throw ConfigInvalid("sigma_sq", "must be > 0");
  if (!(sigmaZ_sq >= 0.0)) throw ConfigInvalid("sigmaZ_sq", "must be >= 0");
}

double gaussian_kl(const Eigen::VectorXd& m0, const Eigen::MatrixXd& s0, const Eigen::VectorXd& m1,
                   const Eigen::MatrixXd& s1) {
  require_spd(s0, "covariance");
  require_spd(s1, "covariance");
  // generalized eigenvalues of (s0, s1) keep tr - logdet - k accurate
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(s0, s1);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ges.eigenvalues().size(); ++i) {
    double l = ges.eigenvalues()(i) - 1.0;
    acc += l - std::log1p(l);
  }
  Eigen::VectorXd dm = m1 - m0;
  double quad = dm.dot(s1.llt().solve(dm));
  return 0.5 * (acc + quad);
}

ChannelInfo gaussian_channel_info(const GaussianChannel& ch) {
  require_spd(ch.Sigma, "Sigma");
  require_spd(ch.SigmaN, "SigmaN");
  if (ch.A.cols() != ch.Sigma.rows() || ch.A.rows() != ch.SigmaN.rows())
    throw ConfigInvalid("A", "shape does not match the covariances");
  Eigen::MatrixXd k = ch.A * ch.Sigma * ch.A.transpose();
  k = 0.5 * (k + k.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(k, ch.SigmaN);
  // I = 1/2 tr(SigmaN^-1 K) - D(P_Y || P_N), L = 1/2 tr(...) + D(P_Y || P_N)
  double half_tr = 0.0, d = 0.0;
  for (Eigen::Index i = 0; i < ges.eigenvalues().size(); ++i) {
    double l = std::max(0.0, ges.eigenvalues()(i));
    half_tr += 0.5 * l;
    d += 0.5 * (l - std::log1p(l));
  }
  return {half_tr - d, half_tr + d};
}

MeanClosedForms mean_closed_forms(const GaussianMeanConfig& cfg) {
  cfg.validate();
  MeanClosedForms r;
  double denom = cfg.n * cfg.sigma0_sq + cfg.sigma_sq;
  r.sigma1_sq = cfg.sigma1_sq();
  r.gen = 2.0 * cfg.d * cfg.sigma0_sq * cfg.sigmaZ_sq / denom;
  if (cfg.sigmaZ_sq > 0.0) {
    // W depends on S only through sum Z_i: W = (sigma1^2/sigma^2) sum Z_i + const + N(0, sigma1^2 I)
    GaussianChannel ch;
    int d = cfg.d;
    ch.A = (r.sigma1_sq / cfg.sigma_sq) * Eigen::MatrixXd::Identity(d, d);
    ch.Sigma = cfg.n * cfg.sigmaZ_sq * Eigen::MatrixXd::Identity(d, d);
    ch.SigmaN = r.sigma1_sq * Eigen::MatrixXd::Identity(d, d);
    ChannelInfo ci = gaussian_channel_info(ch);
    r.mutual = ci.mutual;
    r.lautum = ci.lautum;
  }
  r.iskl = r.mutual + r.lautum;
  return r;
}

McEstimate mc_mean_gen(const GaussianMeanConfig& cfg, long trials, std::uint64_t seed, DataShape shape) {
  cfg.validate();
  if (trials < 1000) throw ConfigInvalid("trials", "must be >= 1000");
  const int d = cfg.d, n = cfg.n;
  const double s1 = std::sqrt(cfg.sigma1_sq());
  const double sz = std::sqrt(cfg.sigmaZ_sq);
  std::vector<double> vals(static_cast<std::size_t>(trials));
  parallel_for(vals.size(), [&](std::size_t t) {
    Rng rng(seed, t);
    std::normal_distribution<double> nd(0.0, 1.0);
    auto draw = [&](int j) {
      if (shape == DataShape::TwoPoint) return cfg.mu(j) + ((rng() >> 63) ? sz : -sz);
      return cfg.mu(j) + sz * nd(rng);
    };
    std::vector<double> z(static_cast<std::size_t>(n) * d);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) {
        z[i * d + j] = draw(j);
        sum(j) += z[i * d + j];
      }
    Eigen::VectorXd w(d);
    for (int j = 0; j < d; ++j)
      w(j) = cfg.sigma1_sq() * (cfg.mu0(j) / cfg.sigma0_sq + sum(j) / cfg.sigma_sq) + s1 * nd(rng);
    // (1/n) sum_i (2W - Z~_i - Z_i)^T (Z_i - Z~_i)
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) {
        double zt = draw(j);
        double zi = z[i * d + j];
        acc += (2.0 * w(j) - zt - zi) * (zi - zt);
      }
    vals[t] = acc / n;
  });
  return summarize(vals);
}

IsmiBoundReport ismi_bound(const GaussianMeanConfig& cfg) {
  cfg.validate();
  if (cfg.n < 2) throw NTooSmall(cfg.n);
  const double n = cfg.n, d = cfg.d;
  const double s0 = cfg.sigma0_sq, sz = cfg.sigmaZ_sq, s2 = cfg.sigma_sq;
  const double s1 = cfg.sigma1_sq();
  IsmiBoundReport r;
  double log_term = std::log1p(s0 * sz / ((n - 1.0) * s0 * sz + n * s0 * s2 + s2 * s2));
  r.per_sample_mi = 0.5 * d * log_term;
  r.sigma_ell_sq = (n * s1 * s1 / (s2 * s2) + 1.0) * sz + s1;
  r.eta = s2 / (n * s0 + s2) * (cfg.mu0 - cfg.mu).squaredNorm();
  // left-tail variance proxy 2(d sl^4 + 2 sl^2 eta) of the scaled non-central chi-square
  double v = d * d * r.sigma_ell_sq * r.sigma_ell_sq + 2.0 * d * r.sigma_ell_sq * r.eta;
  r.bound = std::sqrt(2.0 * v * log_term);
  r.dominates_gen = r.bound >= mean_closed_forms(cfg).gen;
  return r;
}

double pac_bayes_epsilon(double sigma, double n, double delta) {
  return std::pow(2.0 * sigma * sigma * std::log(1.0 / delta) / n, 0.25);
}

double pac_bayes_bound(const PacBayesInputs& in) {
  if (!(in.delta > 0.0 && in.delta < 0.5)) throw DeltaOutOfRange(in.delta);
  if (!(in.c_p >= 0.0)) throw ConfigInvalid("c_p", "must be >= 0");
  if (!(in.sigma > 0.0)) throw ConfigInvalid("sigma", "must be > 0");
  if (!(in.gamma > 0.0)) throw GammaNonPositive(in.gamma);
  if (!(in.n >= 1.0)) throw ConfigInvalid("n", "must be >= 1");
  if (!(in.prime_shift >= 0.0)) throw ConfigInvalid("prime_shift", "must be >= 0");
  double s2 = in.sigma * in.sigma;
  double eps = pac_bayes_epsilon(in.sigma, in.n, in.delta);
  double base = s2 * in.gamma / ((1.0 + in.c_p) * in.n);
  return 2.0 * base + 2.0 * std::sqrt(base) * (std::pow(2.0 * s2 * in.prime_shift, 0.25) + eps) + eps * eps;
}

double pac_bayes_bound(const GaussianMeanConfig& cfg, double sigma, double prime_shift, double delta, double c_p) {
  cfg.validate();
  return pac_bayes_bound(PacBayesInputs{sigma, cfg.gamma(), static_cast<double>(cfg.n), prime_shift, delta, c_p});
}

double truncated_sq_population_risk(double w, double mu, double sigmaZ_sq, double cap) {
  double t = std::sqrt(cap);
  double m = mu - w;
  double s = std::sqrt(sigmaZ_sq);
  if (s == 0.0) return std::min(m * m, cap);
  double a = (-t - m) / s, b = (t - m) / s;
  double mass = Phi(b) - Phi(a);
  double inner = (m * m + s * s) * mass + 2.0 * m * s * (phi(a) - phi(b)) + s * s * (a * phi(a) - b * phi(b));
  return inner + cap * (1.0 - mass);
}

PacCoverage pac_bayes_coverage(const PacCoverageConfig& cfg, double delta, long trials, std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 0.5)) throw DeltaOutOfRange(delta);
  if (cfg.grid_points < 2 || !(cfg.grid_hi > cfg.grid_lo)) throw ConfigInvalid("grid", "need >= 2 points on a nonempty range");
  if (cfg.n < 1 || !(cfg.gamma > 0.0) || !(cfg.cap > 0.0) || !(cfg.sigmaZ_sq > 0.0))
    throw ConfigInvalid("pac", "n, gamma, cap, sigmaZ_sq must be positive");
  const int k = cfg.grid_points;
  std::vector<double> grid(k), pop(k);
  for (int i = 0; i < k; ++i) {
    grid[i] = cfg.grid_lo + (cfg.grid_hi - cfg.grid_lo) * i / (k - 1.0);
    pop[i] = truncated_sq_population_risk(grid[i], cfg.mu, cfg.sigmaZ_sq, cfg.cap);
  }
  // uniform prior on the grid; P_Z' = P_Z so the shift term vanishes
  std::vector<double> lq(k);
  for (int i = 0; i < k; ++i) lq[i] = -cfg.gamma * pop[i];
  ProbVec q = ProbVec::from_log(lq);
  const double sigma = cfg.cap / 2.0;
  struct Row {
    double gap, bound, c_p;
  };
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  parallel_for(rows.size(), [&](std::size_t t) {
    Rng rng(seed, t);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> z(cfg.n);
    for (double& v : z) v = cfg.mu + std::sqrt(cfg.sigmaZ_sq) * nd(rng);
    std::vector<double> emp(k), lp(k);
    for (int i = 0; i < k; ++i) {
      double s = 0.0;
      for (double v : z) s += std::min((grid[i] - v) * (grid[i] - v), cfg.cap);
      emp[i] = s / cfg.n;
      lp[i] = -cfg.gamma * emp[i];
    }
    ProbVec p = ProbVec::from_log(lp);
    double gap = 0.0;
    for (int i = 0; i < k; ++i) gap += p[i] * (pop[i] - emp[i]);
    double fwd = kl_divergence(p, q), rev = kl_divergence(q, p);
    double c_p = fwd > kZeroProb ? rev / fwd : 0.0;
    double b = pac_bayes_bound(PacBayesInputs{sigma, cfg.gamma, static_cast<double>(cfg.n), 0.0, delta, c_p});
    rows[t] = {std::fabs(gap), b, c_p};
  });
  PacCoverage out;
  out.delta = delta;
  out.trials = trials;
  long covered = 0;
  for (const Row& r : rows) {
    if (r.gap <= r.bound) ++covered;
    out.mean_bound += r.bound;
    out.mean_gap += r.gap;
    out.mean_c_p += r.c_p;
  }
  double tn = static_cast<double>(trials);
  out.coverage = covered / tn;
  out.mean_bound /= tn;
  out.mean_gap /= tn;
  out.mean_c_p /= tn;
  return out;
}

}  // namespace gibbs
