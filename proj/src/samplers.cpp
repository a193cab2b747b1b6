#include "gibbs/samplers.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/parallel.hpp"

namespace gibbs {

void SgldConfig::validate() const {
  if (!(step > 0.0)) throw ConfigInvalid("step", "must be > 0");
  if (!(gamma > 0.0)) throw GammaNonPositive(gamma);
  if (!(burn_in >= 0) || !(iterations > burn_in)) throw ConfigInvalid("iterations", "need iterations > burn_in >= 0");
}

SgldConfig SgldConfig::with_default_burn_in(double step, double gamma, long iterations, std::uint64_t seed) {
  SgldConfig c;
  c.step = step;
  c.gamma = gamma;
  c.iterations = iterations;
  c.burn_in = iterations / 5;
  c.seed = seed;
  return c;
}

Eigen::MatrixXd sgld_run(const Gradient& grad, const Eigen::VectorXd& initial, const SgldConfig& cfg,
                         const Eigen::MatrixXd& dataset) {
  cfg.validate();
  Rng rng(cfg.seed, cfg.stream);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double noise = std::sqrt(2.0 * cfg.step / cfg.gamma);
  Eigen::VectorXd w = initial;
  Eigen::MatrixXd out(w.size(), cfg.iterations - cfg.burn_in);
  for (long k = 0; k < cfg.iterations; ++k) {
    Eigen::VectorXd g = grad(w, dataset);
    for (Eigen::Index j = 0; j < w.size(); ++j) w(j) += -cfg.step * g(j) + noise * nd(rng);
    double norm = w.norm();
    if (!std::isfinite(norm) || norm > 1e10) throw Diverged(k + 1, norm);
    if (k >= cfg.burn_in) out.col(k - cfg.burn_in) = w;
  }
  return out;
}

SgldMoments sgld_quadratic_moments(double m, double gamma, double step, long iterations, long chains,
                                   std::uint64_t seed) {
  if (chains < 2) throw ConfigInvalid("chains", "need at least 2 chains");
  std::vector<double> means(static_cast<std::size_t>(chains)), sq(static_cast<std::size_t>(chains));
  long kept = 0;
  Gradient grad = [m](const Eigen::VectorXd& w, const Eigen::MatrixXd&) -> Eigen::VectorXd {
    return 2.0 * (w.array() - m).matrix();
  };
  SgldConfig base = SgldConfig::with_default_burn_in(step, gamma, iterations, seed);
  kept = base.iterations - base.burn_in;
  parallel_for(means.size(), [&](std::size_t c) {
    SgldConfig cfg = base;
    cfg.stream = c;
    Eigen::MatrixXd tr = sgld_run(grad, Eigen::VectorXd::Constant(1, m), cfg, Eigen::MatrixXd());
    means[c] = tr.row(0).mean();
    sq[c] = (tr.row(0).array() - m).square().mean();
  });
  SgldMoments r;
  r.chains = chains;
  r.kept_per_chain = kept;
  McEstimate mu = summarize(means);
  r.mean = mu.estimate;
  r.mean_se = mu.std_error;
  // per-chain variance about the grand mean
  std::vector<double> vars(means.size());
  for (std::size_t c = 0; c < means.size(); ++c) vars[c] = sq[c] - 2.0 * (means[c] - m) * (r.mean - m) + (r.mean - m) * (r.mean - m);
  McEstimate v = summarize(vars);
  r.variance = v.estimate;
  r.variance_se = v.std_error;
  r.target_variance = 1.0 / (2.0 * gamma);
  r.discrete_variance = 1.0 / (2.0 * gamma * (1.0 - step));
  return r;
}

McEstimate mc_gen_error(const McModel& model, long trials, std::uint64_t seed) {
  if (trials < 1000) throw ConfigInvalid("trials", "must be >= 1000");
  if (model.holdout < 1) throw ConfigInvalid("holdout", "must be >= 1");
  std::vector<double> vals(static_cast<std::size_t>(trials));
  parallel_for(vals.size(), [&](std::size_t t) {
    Rng rng(seed, t);
    Eigen::MatrixXd s = model.sample_dataset(rng);
    Eigen::VectorXd w = model.sample_posterior(s, rng);
    double le = 0.0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) le += model.loss(w, s.row(i).transpose());
    le /= static_cast<double>(s.rows());
    double lp = 0.0;
    for (int j = 0; j < model.holdout; ++j) lp += model.loss(w, model.sample_point(rng));
    lp /= model.holdout;
    vals[t] = lp - le;
  });
  return summarize(vals);
}

}  // namespace gibbs
