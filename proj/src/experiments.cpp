#include "gibbs/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "gibbs/format.hpp"
#include "gibbs/parallel.hpp"

namespace gibbs {

namespace {

std::string describe(const char* label, double v) {
  std::ostringstream os;
  os.precision(6);
  os << label << "=" << v;
  return os.str();
}

double rel_dev(double a, double ref) {
  double d = std::fabs(a - ref);
  return std::fabs(ref) < 1e-9 ? d : d / std::fabs(ref);
}

}  // namespace

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

LearningProblem random_problem(Rng& rng, bool iid, int max_z, int max_w, int max_n) {
  LearningProblem p;
  int nz = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_z - 1));
  int nw = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_w - 1));
  p.n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n));
  p.loss.resize(nw, nz);
  for (int w = 0; w < nw; ++w)
    for (int z = 0; z < nz; ++z) p.loss(w, z) = rng.uniform();
  std::vector<double> pr(nw), pz(nz);
  for (double& v : pr) v = 0.05 + rng.uniform();
  p.prior = ProbVec::normalized(pr);
  if (iid) {
    for (double& v : pz) v = 0.05 + rng.uniform();
    p.data = IidData{ProbVec::normalized(pz)};
  } else {
    std::size_t count = static_cast<std::size_t>(std::pow(nz, p.n));
    std::vector<double> ps(count);
    for (double& v : ps) v = 0.01 + rng.uniform();
    p.data = JointData{ProbVec::normalized(ps)};
  }
  for (int z = 0; z < nz; ++z) p.samples.push_back("z" + std::to_string(z));
  for (int w = 0; w < nw; ++w) p.hypotheses.push_back("w" + std::to_string(w));
  return p;
}

IdentitySweep identity_sweep(std::size_t count, std::uint64_t seed, const std::vector<double>& gammas,
                             const std::vector<double>& alphas) {
  auto t0 = std::chrono::steady_clock::now();
  IdentitySweep sweep;
  sweep.records.resize(count);
  std::size_t ng = gammas.size();
  for (std::size_t i = 0; i < count; ++i) {
    IdentityRecord& r = sweep.records[i];
    Rng rng(seed, i);
    r.index = i;
    r.gamma = gammas[i % ng];
    r.iid = (i / ng) % 2 == 0;
    LearningProblem p = random_problem(rng, r.iid);
    r.n = p.n;
    r.nz = static_cast<int>(p.num_z());
    r.nw = static_cast<int>(p.num_w());
    r.report = gen_characterizations(p, r.gamma);
    r.consistent = report_consistent(r.report);
    r.max_rel_dev = std::max(rel_dev(r.report.via_iskl, r.report.direct), rel_dev(r.report.via_skl_div, r.report.direct));
    if (r.report.via_cmi) r.max_rel_dev = std::max(r.max_rel_dev, rel_dev(*r.report.via_cmi, r.report.direct));
    if (r.report.via_replace_one) r.max_rel_dev = std::max(r.max_rel_dev, rel_dev(*r.report.via_replace_one, r.report.direct));
    r.sandwich = bounded_loss_sandwich(p, r.gamma, alphas);
    auto near = r.sandwich.renyi.find(1.01);
    if (near != r.sandwich.renyi.end() && r.sandwich.gen > 0.0)
      r.renyi_near_one_rel_gap = (near->second - r.sandwich.gen) / r.sandwich.gen;
    r.prop = proposition_compare(p, r.gamma);
    r.prop_ok = r.prop.holds(1e-10);
    r.ratios = ratio_constants(p, r.gamma);
    if (!r.ratios.degenerate) r.ck_le_ci = r.ratios.c_k <= r.ratios.c_i * (1.0 + 1e-10) + 1e-12;
  }
  sweep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sweep;
}

std::vector<Check> identity_checks(const IdentitySweep& sweep, double tol) {
  std::size_t n = sweep.records.size(), consistent = 0, iid = 0, iid_full = 0, lower = 0, upper = 0, renyi = 0,
              near = 0, prop = 0, ck = 0, ck_total = 0;
  double worst_dev = 0.0, worst_near = 0.0;
  for (const auto& r : sweep.records) {
    consistent += r.consistent;
    worst_dev = std::max(worst_dev, r.max_rel_dev);
    if (r.iid) {
      ++iid;
      iid_full += r.report.via_cmi.has_value() && r.report.via_replace_one.has_value();
    }
    lower += r.sandwich.lower_ok;
    upper += r.sandwich.upper_ok;
    renyi += r.sandwich.renyi_ok;
    bool near_ok = r.renyi_near_one_rel_gap <= tol;
    near += near_ok;
    worst_near = std::max(worst_near, r.renyi_near_one_rel_gap);
    prop += r.prop_ok;
    if (!r.ratios.degenerate) {
      ++ck_total;
      ck += r.ck_le_ci;
    }
  }
  auto frac = [](std::size_t a, std::size_t b) { return std::to_string(a) + "/" + std::to_string(b); };
  std::vector<Check> out;
  out.push_back({"four_way_identity", consistent == n && iid_full == iid,
                 frac(consistent, n) + " consistent, " + frac(iid_full, iid) + " iid with all five forms, " +
                     describe("worst_rel_dev", worst_dev)});
  out.push_back({"tv_lower_bound", lower == n, frac(lower, n)});
  out.push_back({"parametric_upper_bounds", upper == n, frac(upper, n)});
  out.push_back({"renyi_upper_bounds", renyi == n, frac(renyi, n)});
  out.push_back({"renyi_near_one_within_tolerance", near == n,
                 frac(near, n) + " within " + csv_num(tol) + ", " + describe("worst_rel_gap", worst_near)});
  out.push_back({"proposition_inequalities", prop == n, frac(prop, n)});
  out.push_back({"ck_le_ci", ck == ck_total, frac(ck, ck_total)});
  return out;
}

MonotonicitySweep monotonicity_sweep(std::size_t count, std::uint64_t seed, const std::vector<double>& gammas) {
  MonotonicitySweep s;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed, i);
    LearningProblem p = random_problem(rng, i % 2 == 0);
    std::vector<double> c = empirical_risk_curve(p, gammas);
    bool mono = true;
    for (std::size_t k = 1; k < c.size(); ++k)
      if (c[k] > c[k - 1] + 1e-12) mono = false;
    s.curves.push_back(std::move(c));
    s.monotone.push_back(mono);
  }
  return s;
}

ConcavitySweep concavity_sweep(std::size_t count, std::uint64_t seed, double gamma) {
  ConcavitySweep s;
  s.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed, i);
    LearningProblem p = random_problem(rng, true);
    std::vector<double> a(p.num_z()), b(p.num_z());
    for (double& v : a) v = 0.05 + rng.uniform();
    for (double& v : b) v = 0.05 + rng.uniform();
    double w = 0.1 + 0.8 * rng.uniform();
    std::vector<std::pair<double, DataModel>> comps = {{w, IidData{ProbVec::normalized(a)}},
                                                       {1.0 - w, IidData{ProbVec::normalized(b)}}};
    ConcavityResult r = concavity_probe(p, comps, gamma);
    s.min_slack = std::min(s.min_slack, r.gen_mixture - r.avg_gen);
    s.results.push_back(std::move(r));
  }
  return s;
}

std::vector<CounterexampleCase> counterexample_cases(const std::vector<double>& epsilons) {
  std::vector<CounterexampleCase> out;
  for (double e : epsilons) out.push_back({e, chain_rule_example(e)});
  return out;
}

std::vector<GaussianMeanConfig> default_gaussian_configs() {
  auto make = [](int d, int n, double s0, double sz, double s2, double shift) {
    GaussianMeanConfig c;
    c.d = d;
    c.n = n;
    c.sigma0_sq = s0;
    c.sigmaZ_sq = sz;
    c.sigma_sq = s2;
    c.mu = Eigen::VectorXd::Constant(d, 0.5);
    c.mu0 = Eigen::VectorXd::Constant(d, 0.5 + shift);
    return c;
  };
  return {make(1, 10, 1.0, 1.0, 1.0, 0.0), make(2, 5, 2.0, 0.5, 1.0, 0.3), make(3, 20, 0.5, 2.0, 2.0, -1.0),
          make(1, 50, 1.0, 1.0, 0.5, 0.0), make(4, 8, 1.5, 1.0, 3.0, 0.7)};
}

GaussianMcRow gaussian_mc_row(const GaussianMeanConfig& cfg, long trials, std::uint64_t seed, DataShape shape) {
  GaussianMcRow r;
  r.cfg = cfg;
  r.shape = shape;
  r.closed = mean_closed_forms(cfg);
  r.mc = mc_mean_gen(cfg, trials, seed, shape);
  r.z_score = r.mc.std_error > 0.0 ? (r.mc.estimate - r.closed.gen) / r.mc.std_error : 0.0;
  return r;
}

std::vector<DecayPoint> decay_curve(GaussianMeanConfig base, const std::vector<int>& ns) {
  std::vector<DecayPoint> out;
  for (int n : ns) {
    base.n = n;
    double g = mean_closed_forms(base).gen;
    base.n = 2 * n;
    double g2 = mean_closed_forms(base).gen;
    out.push_back({n, g, g / g2});
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  std::size_t k = x.size();
  for (std::size_t i = 0; i < k; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

IsmiScan ismi_scan(GaussianMeanConfig base, const std::vector<int>& ns) {
  IsmiScan s;
  std::vector<double> xs, ys;
  for (int n : ns) {
    base.n = n;
    IsmiPoint p;
    p.n = n;
    p.gamma = base.gamma();
    p.gen = mean_closed_forms(base).gen;
    p.ismi = ismi_bound(base);
    p.ratio = p.ismi.bound / p.gen;
    xs.push_back(n);
    ys.push_back(p.ratio);
    s.points.push_back(p);
  }
  s.exponent = loglog_slope(xs, ys);
  return s;
}

LaplaceComparison laplace_vs_exact(const GaussianMeanConfig& cfg, double gamma, long datasets, std::uint64_t seed) {
  GaussianMeanConfig at = cfg;
  at.sigma_sq = cfg.n / (2.0 * gamma);
  LaplaceComparison r;
  r.gamma = gamma;
  r.exact_gen = mean_closed_forms(at).gen;
  std::vector<WellSample> samples(static_cast<std::size_t>(datasets));
  const double sd = std::sqrt(cfg.sigmaZ_sq / cfg.n);
  const Eigen::MatrixXd h = 2.0 * Eigen::MatrixXd::Identity(cfg.d, cfg.d);
  parallel_for(samples.size(), [&](std::size_t t) {
    Rng rng(seed, t);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd zbar(cfg.d);
    for (int j = 0; j < cfg.d; ++j) zbar(j) = cfg.mu(j) + sd * nd(rng);
    samples[t] = {zbar, h, 1.0};
  });
  r.laplace_gen = single_well_gen(samples);
  r.rel_gap = std::fabs(r.laplace_gen - r.exact_gen) / r.exact_gen;
  return r;
}

MleSpec random_spd_pair(Rng& rng, int d, double n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  auto spd = [&](double ridge) {
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = nd(rng);
    Eigen::MatrixXd m = a * a.transpose() + ridge * Eigen::MatrixXd::Identity(d, d);
    return Eigen::MatrixXd(0.5 * (m + m.transpose()));
  };
  MleSpec s;
  s.d = d;
  s.n = n;
  s.J = spd(0.5);
  s.fisher = spd(0.1);
  return s;
}

std::vector<AicCheck> aic_random_pairs(std::size_t count, std::uint64_t seed, double n) {
  std::vector<AicCheck> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed, i);
    int d = 1 + static_cast<int>(rng() % 6);
    MleSpec s = random_spd_pair(rng, d, n);
    AicCheck c;
    c.d = d;
    c.n = n;
    c.value = mle_asymptotic_gen(s);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(s.fisher, s.J);
    c.eigen_route = ges.eigenvalues().sum() / n;
    out.push_back(c);
  }
  return out;
}

}  // namespace gibbs
