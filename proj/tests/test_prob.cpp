#include <cmath>

#include "doctest.h"
#include "gibbs/errors.hpp"
#include "gibbs/prob.hpp"
#include "gibbs/rng.hpp"
#include "oracles.hpp"

using namespace gibbs;

namespace {

ProbVec bern(double p) { return ProbVec({1.0 - p, p}); }

ProbVec random_prob(Rng& rng, std::size_t k) {
  std::vector<double> w(k);
  for (auto& v : w) v = 0.05 + rng.uniform();
  return ProbVec::normalized(w);
}

}  // namespace

TEST_CASE("prob vectors validate their input") {
  CHECK_THROWS_AS(ProbVec({0.5, 0.6}), InvalidDistribution);
  CHECK_THROWS_AS(ProbVec({1.5, -0.5}), InvalidDistribution);
  CHECK_NOTHROW(ProbVec({0.25, 0.75}));
  ProbVec u = ProbVec::uniform(4);
  CHECK(u[2] == doctest::Approx(0.25));
  ProbVec l = ProbVec::from_log({0.0, std::log(3.0)});
  CHECK(l[1] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("kl divergence") {
  CHECK(kl_divergence(bern(0.3), bern(0.3)) == 0.0);
  double want = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
  CHECK(kl_divergence(bern(0.5), bern(0.25)) == doctest::Approx(want).epsilon(1e-14));
  CHECK_THROWS_AS(kl_divergence(bern(0.5), bern(0.0)), AbsoluteContinuityViolation);
  CHECK_THROWS_AS(kl_divergence(ProbVec({0.5, 0.5}), ProbVec::uniform(3)), AlphabetMismatch);
  Rng rng(11, 0);
  for (int t = 0; t < 50; ++t) {
    ProbVec p = random_prob(rng, 5), q = random_prob(rng, 5);
    double ref = static_cast<double>(oracle::kl(oracle::to_ld(p.weights()), oracle::to_ld(q.weights())));
    CHECK(kl_divergence(p, q) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("kl divergence keeps relative precision for nearby distributions") {
  ProbVec p({0.5 + 1e-9, 0.5 - 1e-9}), q = ProbVec::uniform(2);
  // 2 * (1e-9)^2 to leading order
  CHECK(kl_divergence(p, q) == doctest::Approx(2e-18).epsilon(1e-6));
}

TEST_CASE("symmetrized kl") {
  CHECK(symmetrized_kl(bern(0.2), bern(0.2)) == 0.0);
  double want = kl_divergence(bern(0.5), bern(0.25)) + kl_divergence(bern(0.25), bern(0.5));
  CHECK(symmetrized_kl(bern(0.5), bern(0.25)) == doctest::Approx(want).epsilon(1e-14));
  Rng rng(12, 0);
  for (int t = 0; t < 20; ++t) {
    ProbVec p = random_prob(rng, 4), q = random_prob(rng, 4);
    CHECK(symmetrized_kl(p, q) == doctest::Approx(symmetrized_kl(q, p)).epsilon(1e-14));
  }
}

TEST_CASE("renyi divergence") {
  ProbVec p = bern(0.3);
  CHECK(renyi_divergence(p, p, 2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(renyi_divergence(p, p, 1.0), AlphaOutOfRange);
  CHECK_THROWS_AS(renyi_divergence(p, p, 0.0), AlphaOutOfRange);
  Rng rng(13, 0);
  for (int t = 0; t < 30; ++t) {
    ProbVec a = random_prob(rng, 4), b = random_prob(rng, 4);
    CHECK(std::fabs(renyi_divergence(a, b, 1.0 + 1e-6) - kl_divergence(a, b)) <= 1e-4);
    CHECK(renyi_divergence(a, b, 2.0) >= renyi_divergence(a, b, 1.5));
    // two-term closed form at alpha = 2
    long double s = 0;
    for (std::size_t i = 0; i < 4; ++i) s += (long double)a[i] * a[i] / b[i];
    CHECK(renyi_divergence(a, b, 2.0) == doctest::Approx((double)std::log(s)).epsilon(1e-12));
  }
}

TEST_CASE("renyi divergence keeps relative precision for nearby distributions") {
  ProbVec p({0.5 + 1e-9, 0.5 - 1e-9}), q = ProbVec::uniform(2);
  // ln(1 + 4e-18) at alpha = 2
  CHECK(renyi_divergence(p, q, 2.0) == doctest::Approx(4e-18).epsilon(1e-6));
  CHECK(renyi_divergence(p, q, 1.5) == doctest::Approx(3e-18).epsilon(1e-6));
  CHECK(renyi_divergence(ProbVec({0.5, 0.5}), ProbVec({0.25, 0.75}), 0.5) ==
        doctest::Approx(-2.0 * std::log(std::sqrt(0.125) + std::sqrt(0.375))).epsilon(1e-14));
  CHECK(renyi_divergence(ProbVec({1.0, 0.0}), ProbVec({0.5, 0.5}), 3.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("total variation uses the sum of absolute differences") {
  CHECK(total_variation(bern(0.4), bern(0.4)) == 0.0);
  CHECK(total_variation(ProbVec({1.0, 0.0}), ProbVec({0.0, 1.0})) == doctest::Approx(2.0));
  CHECK(total_variation(bern(0.5), bern(0.25)) == doctest::Approx(0.5));
}

TEST_CASE("info triple on joint tables") {
  JointTable indep = JointTable::from_channel(ProbVec({0.3, 0.7}), {ProbVec({0.2, 0.5, 0.3}), ProbVec({0.2, 0.5, 0.3})});
  InfoReport r = info_triple(indep);
  CHECK(std::fabs(r.mutual) < 1e-15);
  CHECK(std::fabs(r.lautum) < 1e-15);
  CHECK(std::fabs(r.symmetrized) < 1e-15);

  Rng rng(14, 0);
  for (int t = 0; t < 20; ++t) {
    ProbVec flat = random_prob(rng, 9);
    JointTable j(3, 3, flat.weights());
    InfoReport ir = info_triple(j);
    long double mi, la;
    oracle::info(oracle::to_ld(flat.weights()), 3, 3, mi, la);
    CHECK(ir.mutual == doctest::Approx((double)mi).epsilon(1e-12));
    CHECK(ir.lautum == doctest::Approx((double)la).epsilon(1e-12));
    CHECK(ir.symmetrized == doctest::Approx(symmetrized_kl(j.flatten(), j.product().flatten())).epsilon(1e-12));
    CHECK(ir.mutual == doctest::Approx(kl_divergence(j.flatten(), j.product().flatten())).epsilon(1e-12));
  }
}

TEST_CASE("conditional info triple") {
  Rng rng(15, 0);
  ProbVec a = random_prob(rng, 6), b = random_prob(rng, 6);
  JointTable ja(2, 3, a.weights()), jb(2, 3, b.weights());
  InfoReport single = conditional_info_triple({{1.0, ja}});
  CHECK(single.mutual == doctest::Approx(info_triple(ja).mutual).epsilon(1e-15));

  JointTable indep = ja.product();
  InfoReport zero = conditional_info_triple({{0.4, indep}, {0.6, jb.product()}});
  CHECK(std::fabs(zero.symmetrized) < 1e-15);

  InfoReport mix = conditional_info_triple({{0.25, ja}, {0.75, jb}});
  CHECK(mix.mutual == doctest::Approx(0.25 * info_triple(ja).mutual + 0.75 * info_triple(jb).mutual).epsilon(1e-14));
  CHECK(mix.lautum == doctest::Approx(0.25 * info_triple(ja).lautum + 0.75 * info_triple(jb).lautum).epsilon(1e-14));
}

TEST_CASE("channel info matches the joint-table route") {
  Rng rng(16, 0);
  ProbVec in = random_prob(rng, 4);
  CondTable ch;
  for (int i = 0; i < 4; ++i) ch.push_back(random_prob(rng, 5));
  InfoReport a = channel_info(in, ch), b = info_triple(JointTable::from_channel(in, ch));
  CHECK(a.mutual == doctest::Approx(b.mutual).epsilon(1e-13));
  CHECK(a.lautum == doctest::Approx(b.lautum).epsilon(1e-13));
}

TEST_CASE("log-sum-exp survives extreme magnitudes") {
  CHECK(log_sum_exp({-1000.0, -1000.0}) == doctest::Approx(-1000.0 + std::log(2.0)));
  CHECK(log_sum_exp({800.0, 0.0}) == doctest::Approx(800.0));
  CHECK(kl_forward_term(0.0) == 0.0);
  CHECK(kl_reverse_term(1e-5) == doctest::Approx(0.5e-10).epsilon(1e-5));
}
