#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "gibbs/errors.hpp"
#include "gibbs/gaussian.hpp"
#include "gibbs/parallel.hpp"
#include "gibbs/samplers.hpp"

using namespace gibbs;

namespace {

Gradient quadratic(double m, double a = 1.0) {
  return [m, a](const Eigen::VectorXd& w, const Eigen::MatrixXd&) -> Eigen::VectorXd {
    return 2.0 * a * (w.array() - m).matrix();
  };
}

}  // namespace

TEST_CASE("sgld stationary moments on a quadratic") {
  SgldMoments mo = sgld_quadratic_moments(1.5, 4.0, 1e-3, 100000, 100, 3);
  CHECK(std::fabs(mo.mean - 1.5) <= 3.0 * mo.mean_se);
  CHECK(std::fabs(mo.variance - 0.125) <= 0.05 * 0.125);
  CHECK(mo.discrete_variance == doctest::Approx(1.0 / (8.0 * (1.0 - 1e-3))));
}

TEST_CASE("sgld runs are reproducible") {
  SgldConfig cfg = SgldConfig::with_default_burn_in(1e-3, 4.0, 5000, 17);
  CHECK(cfg.burn_in == 1000);
  Eigen::MatrixXd a = sgld_run(quadratic(0.0), Eigen::VectorXd::Zero(2), cfg, Eigen::MatrixXd());
  Eigen::MatrixXd b = sgld_run(quadratic(0.0), Eigen::VectorXd::Zero(2), cfg, Eigen::MatrixXd());
  REQUIRE(a.cols() == 4000);
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  cfg.stream = 1;
  Eigen::MatrixXd c = sgld_run(quadratic(0.0), Eigen::VectorXd::Zero(2), cfg, Eigen::MatrixXd());
  CHECK(std::memcmp(a.data(), c.data(), sizeof(double) * a.size()) != 0);
}

TEST_CASE("zero gradient gives a gaussian random walk") {
  const long k = 400, chains = 4000;
  const double beta = 1e-2, gamma = 2.0;
  Gradient zero = [](const Eigen::VectorXd& w, const Eigen::MatrixXd&) -> Eigen::VectorXd {
    return Eigen::VectorXd::Zero(w.size());
  };
  double ss = 0.0;
  for (long c = 0; c < chains; ++c) {
    SgldConfig cfg{beta, gamma, k, k - 1, 5, static_cast<std::uint64_t>(c)};
    Eigen::MatrixXd it = sgld_run(zero, Eigen::VectorXd::Zero(1), cfg, Eigen::MatrixXd());
    double v = it(0, it.cols() - 1);
    ss += v * v;
  }
  CHECK(ss / chains == doctest::Approx(2.0 * beta * k / gamma).epsilon(0.1));
}

TEST_CASE("unstable steps diverge") {
  SgldConfig cfg{1e3, 1.0, 1000, 0, 1, 0};
  CHECK_THROWS_AS(sgld_run(quadratic(0.0, 100.0), Eigen::VectorXd::Ones(1), cfg, Eigen::MatrixXd()), Diverged);
  SgldConfig bad{-1.0, 1.0, 100, 0, 1, 0};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("monte carlo generalization error") {
  constexpr int n = 10;
  McModel indep;
  indep.sample_dataset = [n](Rng& r) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd s(n, 1);
    for (int i = 0; i < n; ++i) s(i, 0) = nd(r);
    return s;
  };
  indep.sample_posterior = [](const Eigen::MatrixXd&, Rng& r) {
    std::normal_distribution<double> nd;
    return Eigen::VectorXd::Constant(1, nd(r));
  };
  indep.sample_point = [](Rng& r) {
    std::normal_distribution<double> nd;
    return Eigen::VectorXd::Constant(1, nd(r));
  };
  indep.loss = [](const Eigen::VectorXd& w, const Eigen::VectorXd& z) { return (w - z).squaredNorm(); };
  McEstimate zero = mc_gen_error(indep, 20000, 1);
  CHECK(std::fabs(zero.estimate) <= 4.0 * zero.std_error);

  // exact posterior of the Gaussian mean problem with unit variances
  GaussianMeanConfig cfg;
  double s1 = cfg.sigma1_sq();
  McModel exact = indep;
  exact.sample_posterior = [s1](const Eigen::MatrixXd& s, Rng& r) {
    std::normal_distribution<double> nd;
    double m = s1 * (s.sum() / 1.0);
    return Eigen::VectorXd::Constant(1, m + std::sqrt(s1) * nd(r));
  };
  McEstimate e = mc_gen_error(exact, 100000, 2);
  CHECK(std::fabs(e.estimate - 2.0 / 11.0) <= 4.0 * e.std_error);

  // flat-prior quadratic: exact Gibbs N(mean, 1/(2 gamma)) against an SGLD-backed sampler
  const double gamma = 5.0;
  McModel gibbs = indep;
  gibbs.sample_posterior = [gamma](const Eigen::MatrixXd& s, Rng& r) {
    std::normal_distribution<double> nd;
    return Eigen::VectorXd::Constant(1, s.mean() + nd(r) / std::sqrt(2.0 * gamma));
  };
  McModel sgld = indep;
  sgld.sample_posterior = [gamma](const Eigen::MatrixXd& s, Rng& r) {
    double mean = s.mean();
    SgldConfig cfg{1e-2, gamma, 600, 599, r(), 0};
    Eigen::MatrixXd it = sgld_run(quadratic(mean), Eigen::VectorXd::Zero(1), cfg, s);
    return Eigen::VectorXd(it.col(it.cols() - 1));
  };
  McEstimate a = mc_gen_error(gibbs, 8000, 3), b = mc_gen_error(sgld, 8000, 4);
  CHECK(std::fabs(a.estimate - b.estimate) <= 4.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("parallel loop covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK(worker_count() >= 1);
}
