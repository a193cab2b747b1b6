#include "gibbs/asymptotics.hpp"

#include <cmath>
#include <random>

#include "gibbs/errors.hpp"
#include "gibbs/parallel.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

void require_positive_definite(const Eigen::MatrixXd& h, std::size_t sample) {
  if (h.rows() != h.cols() || h.rows() == 0) throw SingularHessian(sample, "not square");
  double scale = h.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw SingularHessian(sample, "zero or non-finite entries");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw SingularHessian(sample, "not symmetric");
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  if (ldlt.info() != Eigen::Success) throw SingularHessian(sample, "factorization failed");
  double tol = 1e-10 * h.norm();
  for (Eigen::Index i = 0; i < ldlt.vectorD().size(); ++i)
    if (!(ldlt.vectorD()(i) > tol)) throw SingularHessian(sample, "pivot below tolerance");
}

double single_well_gen(const std::vector<WellSample>& samples) {
  if (samples.empty()) throw ConfigInvalid("samples", "empty well");
  const Eigen::Index d = samples[0].w_star.size();
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.w_star.size() != d || s.hessian.rows() != d) throw ConfigInvalid("samples", "inconsistent dimensions");
    if (!(s.weight >= 0.0)) throw ConfigInvalid("samples", "negative weight");
    require_positive_definite(s.hessian, i);
    total += s.weight;
  }
  if (!(total > 0.0)) throw ConfigInvalid("samples", "weights sum to zero");

  Eigen::VectorXd m = Eigen::VectorXd::Zero(d), h = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d), hbar = Eigen::MatrixXd::Zero(d, d);
  for (const auto& s : samples) {
    double p = s.weight / total;
    m += p * s.w_star;
    h += p * s.hessian * s.w_star;
    hbar += p * s.hessian;
  }
  // second moments centered at m; both terms are translation invariant
  double joint_quad = 0.0, cross = 0.0;
  for (const auto& s : samples) {
    double p = s.weight / total;
    Eigen::VectorXd c = s.w_star - m;
    second += p * c * c.transpose();
    joint_quad += p * 0.5 * c.dot(s.hessian * c);
    cross += p * c.dot(s.hessian * s.w_star - h);
  }
  // E_delta[1/2 W^T H(S) W] with W | S = s at W*(s), written around m
  double prod_quad = 0.5 * (hbar * second).trace();
  Eigen::VectorXd hm = Eigen::VectorXd::Zero(d);
  for (const auto& s : samples) hm += (s.weight / total) * s.hessian * (s.w_star - m);
  // cross term from re-centering: E_delta[m^T H W] = -m^T E[H (W - m)]
  double recenter = -m.dot(hm);
  return (prod_quad - joint_quad + recenter) + cross;
}

double multi_well_bound(const std::vector<std::vector<WellSample>>& wells) {
  if (wells.empty()) throw ConfigInvalid("wells", "need at least one well");
  double acc = 0.0;
  for (const auto& w : wells) acc += single_well_gen(w);
  return acc / static_cast<double>(wells.size());
}

double mle_asymptotic_gen(const MleSpec& spec) {
  if (!(spec.n > 0.0)) throw ConfigInvalid("n", "must be > 0");
  if (spec.J.rows() != spec.d || spec.fisher.rows() != spec.d || spec.fisher.cols() != spec.d)
    throw ConfigInvalid("mle", "matrix dimensions must equal d");
  require_positive_definite(spec.J, 0);
  if ((spec.fisher - spec.fisher.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, spec.fisher.cwiseAbs().maxCoeff()))
    throw ConfigInvalid("fisher", "not symmetric");
  if (spec.fisher == spec.J) return spec.d / spec.n;
  Eigen::MatrixXd x = spec.J.ldlt().solve(spec.fisher);
  return x.trace() / spec.n;
}

BayesRegimeResult bayes_regime_mc(int n, double sigma0_sq, double mu, long trials, std::uint64_t seed) {
  if (n < 1 || !(sigma0_sq > 0.0) || trials < 1000) throw ConfigInvalid("bayes", "need n >= 1, sigma0_sq > 0, trials >= 1000");
  const double prec = n + 1.0 / sigma0_sq;
  std::vector<double> vals(static_cast<std::size_t>(trials));
  parallel_for(vals.size(), [&](std::size_t t) {
    Rng rng(seed, t);
    std::normal_distribution<double> nd(0.0, 1.0);
    double zbar = mu + nd(rng) / std::sqrt(static_cast<double>(n));
    double w = n * zbar / prec + nd(rng) / std::sqrt(prec);
    // within-sample sum of squares is independent of (zbar, W); its mean n-1 is used
    vals[t] = 0.5 * n * ((w - mu) * (w - mu) - (w - zbar) * (w - zbar)) + 0.5;
  });
  BayesRegimeResult r;
  r.n_gen = summarize(vals);
  r.exact_n_gen = n * sigma0_sq / (n * sigma0_sq + 1.0);
  return r;
}

}  // namespace gibbs
