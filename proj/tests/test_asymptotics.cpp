#include <cmath>
#include <random>

#include "doctest.h"
#include "gibbs/asymptotics.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/experiments.hpp"
#include "gibbs/stats.hpp"
#include "oracles.hpp"

using namespace gibbs;

namespace {

std::vector<WellSample> random_well(Rng& rng, int d, int m, bool constant_h) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd base = Eigen::MatrixXd::Identity(d, d) * 2.0;
  std::vector<WellSample> out;
  for (int i = 0; i < m; ++i) {
    WellSample s;
    s.w_star.resize(d);
    for (int k = 0; k < d; ++k) s.w_star(k) = nd(rng);
    Eigen::MatrixXd b(d, d);
    for (int k = 0; k < d * d; ++k) b(k / d, k % d) = 0.3 * nd(rng);
    s.hessian = constant_h ? base : Eigen::MatrixXd(base + b * b.transpose());
    s.weight = 0.5 + rng.uniform();
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("single well limit") {
  Rng rng(51, 0);
  auto fixed = random_well(rng, 2, 5, true);
  for (auto& s : fixed) s.w_star = Eigen::Vector2d(0.4, -1.0);
  CHECK(std::fabs(single_well_gen(fixed)) < 1e-14);

  // constant Hessian: tr(H Cov(W*))
  auto cw = random_well(rng, 3, 40, true);
  double tot = 0.0;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(3);
  for (const auto& s : cw) tot += s.weight;
  for (const auto& s : cw) m += s.weight / tot * s.w_star;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(3, 3);
  for (const auto& s : cw) cov += s.weight / tot * (s.w_star - m) * (s.w_star - m).transpose();
  CHECK(single_well_gen(cw) == doctest::Approx((cw[0].hessian * cov).trace()).epsilon(1e-12));

  // translation invariance with dataset-dependent Hessians
  auto vw = random_well(rng, 2, 30, false);
  auto shifted = vw;
  for (auto& s : shifted) s.w_star += Eigen::Vector2d(5.0, -3.0);
  CHECK(single_well_gen(shifted) == doctest::Approx(single_well_gen(vw)).epsilon(1e-10));

  auto bad = vw;
  bad[3].hessian = Eigen::Matrix2d::Zero();
  CHECK_THROWS_AS(single_well_gen(bad), SingularHessian);
  bad[3].hessian << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(single_well_gen(bad), SingularHessian);
}

TEST_CASE("multiple wells") {
  Rng rng(52, 0);
  auto a = random_well(rng, 2, 20, false), b = random_well(rng, 2, 20, false);
  CHECK(multi_well_bound({a}) == doctest::Approx(single_well_gen(a)).epsilon(1e-15));
  CHECK(multi_well_bound({a, a}) == doctest::Approx(single_well_gen(a)).epsilon(1e-15));
  CHECK(multi_well_bound({a, b}) == doctest::Approx(0.5 * (single_well_gen(a) + single_well_gen(b))).epsilon(1e-15));
}

TEST_CASE("double well against a brute-force gibbs density") {
  // loss min((w - 3 - z)^2, (w + 3 - z)^2), z ~ N(0, 0.25), n = 10, flat prior, gamma = 1e3
  const int n = 10, datasets = 2000, grid = 12001;
  const double gamma = 1e3, sz = 0.5, lo = -6.0, h = 12.0 / (grid - 1);
  auto loss = [](double w, double z) { return std::min((w - 3 - z) * (w - 3 - z), (w + 3 - z) * (w + 3 - z)); };
  std::vector<double> lp(grid);
  {
    const int k = 801;
    double zl = -8 * sz, zh = 16 * sz / (k - 1);
    for (int i = 0; i < grid; ++i) {
      long double acc = 0;
      double w = lo + i * h;
      for (int j = 0; j < k; ++j) {
        double z = zl + j * zh;
        double pdf = std::exp(-z * z / (2 * sz * sz)) / (sz * std::sqrt(2 * M_PI));
        acc += (j == 0 || j == k - 1 ? 0.5L : 1.0L) * zh * pdf * loss(w, z);
      }
      lp[i] = (double)acc;
    }
  }
  Rng rng(53, 0);
  std::normal_distribution<double> nd(0.0, sz);
  std::vector<double> per(datasets);
  std::vector<WellSample> up, down;
  std::vector<double> le(grid), wt(grid);
  for (int t = 0; t < datasets; ++t) {
    std::vector<double> z(n);
    double mean = 0.0;
    for (auto& v : z) mean += (v = nd(rng)) / n;
    double best = 1e300;
    for (int i = 0; i < grid; ++i) {
      double w = lo + i * h, s = 0.0;
      for (double v : z) s += loss(w, v);
      le[i] = s / n;
      best = std::min(best, le[i]);
    }
    long double zsum = 0, g = 0;
    for (int i = 0; i < grid; ++i) {
      wt[i] = std::exp(-gamma * (le[i] - best));
      zsum += wt[i];
      g += wt[i] * (lp[i] - le[i]);
    }
    per[t] = (double)(g / zsum);
    up.push_back({Eigen::VectorXd::Constant(1, 3.0 + mean), Eigen::MatrixXd::Constant(1, 1, 2.0), 1.0});
    down.push_back({Eigen::VectorXd::Constant(1, -3.0 + mean), Eigen::MatrixXd::Constant(1, 1, 2.0), 1.0});
  }
  McEstimate mc = summarize(per);
  double bound = multi_well_bound({up, down});
  CHECK(bound >= mc.estimate - 3.0 * mc.std_error);
  CHECK(mc.estimate == doctest::Approx(2.0 * 0.25 / n).epsilon(0.1));
}

TEST_CASE("mle asymptotic form") {
  Eigen::MatrixXd j(3, 3);
  j << 2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0;
  MleSpec s{j, j, 3, 100.0};
  CHECK(mle_asymptotic_gen(s) == 0.03);
  s.fisher = 2.0 * j;
  CHECK(mle_asymptotic_gen(s) == doctest::Approx(0.06).epsilon(1e-14));

  Rng rng(54, 0);
  for (int t = 0; t < 20; ++t) {
    MleSpec r = random_spd_pair(rng, 1 + t % 5, 50.0);
    double v = mle_asymptotic_gen(r);
    CHECK(std::fabs(v - oracle::generalized_trace(r.fisher, r.J) / 50.0) <= 1e-10 * std::max(1.0, v));
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(r.d, r.d) + 3.0 * Eigen::MatrixXd::Identity(r.d, r.d);
    MleSpec c{m.transpose() * r.J * m, m.transpose() * r.fisher * m, r.d, 50.0};
    CHECK(mle_asymptotic_gen(c) == doctest::Approx(v).epsilon(1e-9));
  }
  MleSpec sing{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(2, 2), 2, 10.0};
  CHECK_THROWS_AS(mle_asymptotic_gen(sing), SingularHessian);
}

TEST_CASE("laplace limit on the mean problem") {
  GaussianMeanConfig c;
  c.d = 1;
  c.n = 10;
  LaplaceComparison r = laplace_vs_exact(c, 1e4, 20000, 9);
  CHECK(r.rel_gap <= 0.05);
}

TEST_CASE("bayesian regime") {
  BayesRegimeResult r = bayes_regime_mc(1000, 1.0, 0.3, 20000, 11);
  CHECK(r.exact_n_gen == doctest::Approx(1000.0 / 1001.0).epsilon(1e-14));
  CHECK(std::fabs(r.n_gen.estimate - 1.0) <= 0.1);
  CHECK(std::fabs(r.n_gen.estimate - r.exact_n_gen) <= 4.0 * r.n_gen.std_error);
}
