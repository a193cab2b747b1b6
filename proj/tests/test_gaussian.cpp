#include <cmath>
#include <cstring>

#include "doctest.h"
#include "gibbs/errors.hpp"
#include "gibbs/gaussian.hpp"
#include "gibbs/rng.hpp"
#include "oracles.hpp"

using namespace gibbs;

namespace {

GaussianMeanConfig unit_config(int d = 1, int n = 10) {
  GaussianMeanConfig c;
  c.d = d;
  c.n = n;
  c.mu = Eigen::VectorXd::Zero(d);
  c.mu0 = Eigen::VectorXd::Zero(d);
  return c;
}

}  // namespace

TEST_CASE("gaussian kl closed form") {
  Eigen::VectorXd m0(2), m1(2);
  m0 << 0.1, -0.3;
  m1 << 0.4, 0.2;
  Eigen::MatrixXd s0(2, 2), s1(2, 2);
  s0 << 1.0, 0.3, 0.3, 2.0;
  s1 << 1.5, -0.2, -0.2, 0.8;
  CHECK(gaussian_kl(m0, s0, m0, s0) == doctest::Approx(0.0).epsilon(1e-15));
  Eigen::MatrixXd inv = s1.inverse();
  Eigen::VectorXd dm = m1 - m0;
  double ref = 0.5 * ((inv * s0).trace() + dm.dot(inv * dm) - 2.0 + std::log(s1.determinant() / s0.determinant()));
  CHECK(gaussian_kl(m0, s0, m1, s1) == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("gaussian channel information") {
  GaussianChannel off{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  ChannelInfo z = gaussian_channel_info(off);
  CHECK(z.mutual == 0.0);
  CHECK(z.lautum == 0.0);

  for (auto [a, sx, sn] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{0.5, 2.0, 0.7}, std::tuple{2.0, 0.3, 1.5}}) {
    GaussianChannel ch{Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Constant(1, 1, sx),
                       Eigen::MatrixXd::Constant(1, 1, sn)};
    ChannelInfo ci = gaussian_channel_info(ch);
    oracle::ld mi, la;
    oracle::scalar_channel_quadrature(a, sx, sn, mi, la);
    CHECK(ci.mutual == doctest::Approx((double)mi).epsilon(1e-7));
    CHECK(ci.lautum == doctest::Approx((double)la).epsilon(1e-7));
    CHECK(ci.lautum >= ci.mutual);
  }

  // lautum dominates mutual information on random multivariate channels
  Rng rng(41, 0);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd a(3, 3), b(3, 3), c(3, 3);
    for (int i = 0; i < 9; ++i) {
      a(i / 3, i % 3) = rng.uniform() - 0.5;
      b(i / 3, i % 3) = rng.uniform() - 0.5;
      c(i / 3, i % 3) = rng.uniform() - 0.5;
    }
    GaussianChannel ch{a, b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(3, 3),
                       c * c.transpose() + 0.1 * Eigen::MatrixXd::Identity(3, 3)};
    ChannelInfo ci = gaussian_channel_info(ch);
    CHECK(ci.lautum >= ci.mutual);
    // I from log-determinants
    Eigen::MatrixXd sy = a * ch.Sigma * a.transpose() + ch.SigmaN;
    double ref = 0.5 * std::log(sy.determinant() / ch.SigmaN.determinant());
    CHECK(ci.mutual == doctest::Approx(ref).epsilon(1e-11));
  }
  GaussianChannel bad{Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Constant(1, 1, -1.0), Eigen::MatrixXd::Identity(1, 1)};
  CHECK_THROWS_AS(gaussian_channel_info(bad), NotPositiveDefinite);
}

TEST_CASE("mean estimation closed forms") {
  MeanClosedForms f = mean_closed_forms(unit_config());
  CHECK(f.gen == doctest::Approx(2.0 / 11.0).epsilon(1e-15));
  CHECK(f.iskl / unit_config().gamma() == doctest::Approx(f.gen).epsilon(1e-14));

  GaussianMeanConfig c = unit_config(3, 7);
  c.sigma0_sq = 1.7;
  c.sigmaZ_sq = 0.6;
  c.sigma_sq = 2.2;
  MeanClosedForms g = mean_closed_forms(c);
  double s1 = c.sigma0_sq * c.sigma_sq / (c.n * c.sigma0_sq + c.sigma_sq);
  double r = c.n * s1 * c.sigmaZ_sq / (c.sigma_sq * c.sigma_sq);
  CHECK(g.mutual == doctest::Approx(1.5 * std::log1p(r)).epsilon(1e-13));
  CHECK(g.lautum == doctest::Approx(3.0 * r - 1.5 * std::log1p(r)).epsilon(1e-13));
  CHECK(g.gen == doctest::Approx(2.0 * 3 * c.sigma0_sq * c.sigmaZ_sq / (c.n * c.sigma0_sq + c.sigma_sq)).epsilon(1e-14));

  GaussianMeanConfig tiny = unit_config();
  tiny.sigma0_sq = 1e-12;
  CHECK(mean_closed_forms(tiny).gen < 1e-11);

  double prev = 0.0;
  for (int n : {1250, 2500, 5000, 10000, 20000}) {
    GaussianMeanConfig k = unit_config(1, n);
    double v = mean_closed_forms(k).gen;
    if (n == 20000) CHECK(prev / v == doctest::Approx(2.0).epsilon(0.01));
    prev = v;
  }
  GaussianMeanConfig bad = unit_config();
  bad.sigma_sq = 0.0;
  CHECK_THROWS(mean_closed_forms(bad));
}

TEST_CASE("mean estimation monte carlo") {
  McEstimate a = mc_mean_gen(unit_config(), 100000, 42);
  CHECK(std::fabs(a.estimate - 2.0 / 11.0) <= 4.0 * a.std_error);
  McEstimate b = mc_mean_gen(unit_config(), 100000, 42);
  CHECK(std::memcmp(&a.estimate, &b.estimate, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.std_error, &b.std_error, sizeof(double)) == 0);

  GaussianMeanConfig z = unit_config();
  z.sigmaZ_sq = 0.0;
  CHECK(mc_mean_gen(z, 1000, 3).estimate == 0.0);

  McEstimate two = mc_mean_gen(unit_config(2, 6), 100000, 43, DataShape::TwoPoint);
  CHECK(std::fabs(two.estimate - mean_closed_forms(unit_config(2, 6)).gen) <= 4.0 * two.std_error);
  CHECK_THROWS(mc_mean_gen(unit_config(), 10, 1));
}

TEST_CASE("individual-sample mutual information bound") {
  IsmiBoundReport r = ismi_bound(unit_config());
  CHECK(r.eta == 0.0);
  CHECK(r.bound >= 2.0 / 11.0);
  CHECK(r.dominates_gen);
  CHECK_THROWS_AS(ismi_bound(unit_config(1, 1)), NTooSmall);

  std::vector<double> ln, lr;
  for (int n : {100, 1000, 10000}) {
    GaussianMeanConfig c = unit_config(1, n);
    ln.push_back(std::log(n));
    lr.push_back(std::log(ismi_bound(c).bound / mean_closed_forms(c).gen));
  }
  double mx = (ln[0] + ln[1] + ln[2]) / 3, my = (lr[0] + lr[1] + lr[2]) / 3, sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (ln[i] - mx) * (lr[i] - my);
    sxx += (ln[i] - mx) * (ln[i] - mx);
  }
  CHECK(std::fabs(sxy / sxx - 0.5) <= 0.1);
}

TEST_CASE("pac-bayes bound") {
  PacBayesInputs in{1.0, 1.0, 100.0, 0.0, 0.05, 0.0};
  double eps = std::pow(2.0 * std::log(20.0) / 100.0, 0.25);
  CHECK(pac_bayes_bound(in) == doctest::Approx(0.02 + 2.0 * std::sqrt(0.01) * eps + eps * eps).epsilon(1e-14));

  // frozen from a 40-digit symbolic evaluation
  CHECK(pac_bayes_bound(in) == doctest::Approx(0.36372410106901416232).epsilon(1e-13));
  CHECK(pac_bayes_bound(PacBayesInputs{0.5, 10.0, 1000.0, 0.1, 0.1, 0.2}) ==
        doctest::Approx(0.098079715557466584401).epsilon(1e-13));
  CHECK(pac_bayes_bound(PacBayesInputs{2.0, 5.0, 50.0, 0.5, 0.01, 1.0}) ==
        doctest::Approx(3.3519766214261803858).epsilon(1e-13));

  double prev = std::numeric_limits<double>::infinity();
  for (double d : {0.01, 0.05, 0.1, 0.3, 0.49}) {
    in.delta = d;
    double v = pac_bayes_bound(in);
    CHECK(v < prev);
    prev = v;
  }
  in.delta = 0.5;
  CHECK_THROWS_AS(pac_bayes_bound(in), DeltaOutOfRange);
}

TEST_CASE("truncated squared loss risk") {
  // compare against a fine trapezoid over z
  for (auto [w, mu, s2, cap] : {std::tuple{0.3, 0.0, 1.0, 4.0}, std::tuple{-1.2, 0.5, 0.49, 1.0}, std::tuple{2.0, -0.3, 2.0, 9.0}}) {
    const int k = 200001;
    double sd = std::sqrt(s2), lo = mu - 12 * sd, h = 24 * sd / (k - 1);
    long double acc = 0;
    for (int i = 0; i < k; ++i) {
      double z = lo + i * h;
      double pdf = std::exp(-(z - mu) * (z - mu) / (2 * s2)) / std::sqrt(2 * M_PI * s2);
      acc += (i == 0 || i == k - 1 ? 0.5L : 1.0L) * h * pdf * std::min((w - z) * (w - z), cap);
    }
    CHECK(truncated_sq_population_risk(w, mu, s2, cap) == doctest::Approx((double)acc).epsilon(1e-9));
  }
}

TEST_CASE("pac-bayes coverage") {
  PacCoverageConfig cfg;
  PacCoverage c = pac_bayes_coverage(cfg, 0.1, 2000, 5);
  CHECK(c.coverage >= 0.8);
  CHECK(c.mean_c_p >= 0.0);
}
