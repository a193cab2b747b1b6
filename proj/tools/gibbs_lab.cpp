#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gibbs/experiments.hpp"
#include "gibbs/format.hpp"
#include "gibbs/problem_io.hpp"

namespace fs = std::filesystem;
using namespace gibbs;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Context {
  json params;
  std::uint64_t seed = 7;
  fs::path out;
  std::vector<Check> checks;

  void write(const std::string& name, const std::string& body) const {
    std::ofstream f(out / name, std::ios::binary);
    if (!f) throw ConfigInvalid("--out", "cannot write " + (out / name).string());
    f << body;
  }
  void add(std::string name, bool ok, std::string detail = "") { checks.push_back({std::move(name), ok, std::move(detail)}); }
};

void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw ConfigInvalid(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigInvalid(path + "." + it.key(), "unknown parameter");
}

std::vector<double> vector_or(const json& j, const std::string& key, const std::string& path, std::vector<double> fb) {
  return j.contains(key) ? get_vector(j, key, path) : fb;
}

std::vector<int> ints_or(const json& j, const std::string& key, const std::string& path, std::vector<int> fb) {
  if (!j.contains(key)) return fb;
  std::vector<int> out;
  for (double v : get_vector(j, key, path)) {
    if (v != std::floor(v) || v < 1) throw ConfigInvalid(path + "." + key, "expected positive integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

long positive_int(const json& j, const std::string& key, const std::string& path, long fb) {
  long v = get_int_or(j, key, path, fb);
  if (v < 1) throw ConfigInvalid(path + "." + key, "must be >= 1");
  return v;
}

std::string num(double v) { return csv_num(v); }

// ---------------------------------------------------------------- verify-identities

void run_verify(Context& ctx) {
  const json& p = ctx.params;
  expect_keys(p, {"instances", "gammas", "alphas", "renyi_near_one_tolerance", "runtime_limit_seconds",
                  "monotonicity_instances", "monotonicity_gammas", "concavity_instances", "concavity_gamma", "problem"},
              "$");
  std::size_t count = static_cast<std::size_t>(positive_int(p, "instances", "$", 200));
  std::vector<double> gammas = vector_or(p, "gammas", "$", {0.1, 1.0, 10.0, 100.0});
  for (double g : gammas)
    if (!(g > 0.0)) throw ConfigInvalid("$.gammas", "must be > 0");
  std::vector<double> alphas = vector_or(p, "alphas", "$", {1.5, 2.0, 4.0, 1.01});
  for (double a : alphas)
    if (!(a > 1.0)) throw ConfigInvalid("$.alphas", "orders must exceed 1");
  double near_tol = get_number_or(p, "renyi_near_one_tolerance", "$", 0.02);
  double limit = get_number_or(p, "runtime_limit_seconds", "$", 60.0);

  IdentitySweep sweep = identity_sweep(count, ctx.seed, gammas, alphas);
  std::string csv = csv_row({"index", "gamma", "iid", "n", "num_z", "num_w", "direct", "via_iskl", "via_skl_div", "via_cmi",
                             "via_replace_one", "mutual", "lautum", "max_rel_dev", "consistent"});
  std::string sand = csv_row({"index", "gamma", "gen", "tv_lower", "bound_name", "value", "feasible", "regime", "constants_used"});
  std::string prop = csv_row({"index", "gamma", "mutual", "lautum", "d_fwd", "d_rev", "c_i", "c_k", "c_c", "c_s", "degenerate", "holds"});
  json reports = json::array();
  for (const auto& r : sweep.records) {
    csv += csv_row({std::to_string(r.index), num(r.gamma), r.iid ? "1" : "0", std::to_string(r.n), std::to_string(r.nz),
                    std::to_string(r.nw), num(r.report.direct), num(r.report.via_iskl), num(r.report.via_skl_div),
                    r.report.via_cmi ? num(*r.report.via_cmi) : "", r.report.via_replace_one ? num(*r.report.via_replace_one) : "",
                    num(r.report.info.mutual), num(r.report.info.lautum), num(r.max_rel_dev), r.consistent ? "1" : "0"});
    for (const auto& b : r.sandwich.upper)
      sand += csv_row({std::to_string(r.index), num(r.gamma), num(r.sandwich.gen), num(r.sandwich.tv_lower), b.name,
                       num(b.value), b.feasible ? "1" : "0", b.regime, b.constants_used});
    for (const auto& [a, v] : r.sandwich.renyi)
      sand += csv_row({std::to_string(r.index), num(r.gamma), num(r.sandwich.gen), num(r.sandwich.tv_lower),
                       "renyi_alpha_" + num(a), num(v), "1", "alpha>1", "alpha=" + num(a)});
    prop += csv_row({std::to_string(r.index), num(r.gamma), num(r.prop.mutual), num(r.prop.lautum), num(r.prop.d_fwd),
                     num(r.prop.d_rev), num(r.ratios.c_i), num(r.ratios.c_k), num(r.ratios.c_c), num(r.ratios.c_s_ratio),
                     r.ratios.degenerate ? "1" : "0", r.prop_ok ? "1" : "0"});
    json jr = gen_report_to_json(r.report);
    jr["index"] = r.index;
    jr["gamma"] = r.gamma;
    jr["iid"] = r.iid;
    reports.push_back(jr);
  }
  ctx.write("gen_reports.csv", csv);
  ctx.write("sandwich.csv", sand);
  ctx.write("propositions.csv", prop);
  ctx.write("gen_reports.json", reports.dump(2) + "\n");
  for (auto& c : identity_checks(sweep, near_tol)) ctx.checks.push_back(c);
  ctx.add("runtime_within_limit", sweep.seconds <= limit, num(sweep.seconds) + " s");

  std::size_t mono_n = static_cast<std::size_t>(positive_int(p, "monotonicity_instances", "$", 50));
  std::vector<double> mono_g = vector_or(p, "monotonicity_gammas", "$", {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0});
  MonotonicitySweep ms = monotonicity_sweep(mono_n, ctx.seed, mono_g);
  std::vector<std::string> head = {"instance"};
  for (double g : mono_g) head.push_back("gamma_" + num(g));
  head.push_back("monotone");
  std::string mcsv = csv_row(head);
  std::size_t mono_ok = 0;
  for (std::size_t i = 0; i < ms.curves.size(); ++i) {
    std::vector<std::string> row = {std::to_string(i)};
    for (double v : ms.curves[i]) row.push_back(num(v));
    row.push_back(ms.monotone[i] ? "1" : "0");
    mcsv += csv_row(row);
    mono_ok += ms.monotone[i];
  }
  ctx.write("monotonicity.csv", mcsv);
  ctx.add("empirical_risk_non_increasing", mono_ok == mono_n, std::to_string(mono_ok) + "/" + std::to_string(mono_n));

  std::size_t conc_n = static_cast<std::size_t>(positive_int(p, "concavity_instances", "$", 50));
  double conc_g = get_number_or(p, "concavity_gamma", "$", 1.0);
  ConcavitySweep cs = concavity_sweep(conc_n, ctx.seed, conc_g);
  std::string ccsv = csv_row({"instance", "gen_mixture", "avg_gen", "slack"});
  for (std::size_t i = 0; i < cs.results.size(); ++i)
    ccsv += csv_row({std::to_string(i), num(cs.results[i].gen_mixture), num(cs.results[i].avg_gen),
                     num(cs.results[i].gen_mixture - cs.results[i].avg_gen)});
  ctx.write("concavity.csv", ccsv);
  ctx.add("mixture_concavity", cs.min_slack >= -1e-12, "min slack " + num(cs.min_slack));

  if (p.contains("problem")) {
    LearningProblem prob = problem_from_json(p.at("problem"), "$.problem");
    json out = json::array();
    bool ok = true;
    for (double g : gammas) {
      GenReport r = gen_characterizations(prob, g);
      ok = ok && report_consistent(r);
      json jr = gen_report_to_json(r);
      jr["gamma"] = g;
      out.push_back(jr);
    }
    ctx.write("problem_reports.json", out.dump(2) + "\n");
    ctx.add("supplied_problem_identity", ok);
  }
}

// ---------------------------------------------------------------- counterexample

void run_counterexample(Context& ctx) {
  const json& p = ctx.params;
  expect_keys(p, {"cases", "tolerance"}, "$");
  double tol = get_number_or(p, "tolerance", "$", 1e-3);
  json cases = p.contains("cases") ? p.at("cases") : json::array({json{{"epsilon", 1e-4}}, json{{"epsilon", 0.01}}});
  if (!cases.is_array() || cases.empty()) throw ConfigInvalid("$.cases", "expected a nonempty array");
  std::string csv = csv_row({"epsilon", "pair", "mutual", "lautum", "symmetrized"});
  for (std::size_t i = 0; i < cases.size(); ++i) {
    std::string path = "$.cases[" + std::to_string(i) + "]";
    expect_keys(cases[i], {"epsilon", "expected", "individual_exceeds_joint"}, path);
    double eps = get_number(cases[i], "epsilon", path);
    ChainRuleReport r = chain_rule_example(eps);
    std::map<std::string, double> values = {
        {"mutual_w_z1", r.w_z1.mutual},           {"lautum_w_z1", r.w_z1.lautum},
        {"iskl_w_z1", r.w_z1.symmetrized},        {"iskl_w_z2", r.w_z2.symmetrized},
        {"mutual_w_z1z2", r.w_z1z2.mutual},       {"lautum_w_z1z2", r.w_z1z2.lautum},
        {"iskl_w_z1z2", r.w_z1z2.symmetrized}};
    csv += csv_row({num(eps), "W;Z1", num(r.w_z1.mutual), num(r.w_z1.lautum), num(r.w_z1.symmetrized)});
    csv += csv_row({num(eps), "W;Z2", num(r.w_z2.mutual), num(r.w_z2.lautum), num(r.w_z2.symmetrized)});
    csv += csv_row({num(eps), "W;Z1,Z2", num(r.w_z1z2.mutual), num(r.w_z1z2.lautum), num(r.w_z1z2.symmetrized)});
    if (cases[i].contains("expected")) {
      const json& ex = cases[i].at("expected");
      expect_keys(ex, {"mutual_w_z1", "lautum_w_z1", "iskl_w_z1", "iskl_w_z2", "mutual_w_z1z2", "lautum_w_z1z2", "iskl_w_z1z2"},
                  path + ".expected");
      for (auto it = ex.begin(); it != ex.end(); ++it) {
        double want = get_number(ex, it.key(), path + ".expected");
        double got = values.at(it.key());
        ctx.add("eps=" + num(eps) + " " + it.key(), std::fabs(got - want) <= tol, "got " + num(got) + " want " + num(want));
      }
    }
    if (cases[i].contains("individual_exceeds_joint")) {
      const json& d = cases[i].at("individual_exceeds_joint");
      if (!d.is_boolean()) throw ConfigInvalid(path + ".individual_exceeds_joint", "expected a boolean");
      ctx.add("eps=" + num(eps) + " direction", r.individual_sum_exceeds_joint == d.get<bool>(),
              r.individual_sum_exceeds_joint ? "sum of individual > joint" : "sum of individual < joint");
    }
  }
  ctx.write("counterexample.csv", csv);
}

// ---------------------------------------------------------------- gaussian-mean

void run_gaussian(Context& ctx) {
  const json& p = ctx.params;
  expect_keys(p, {"configs", "trials", "z_threshold", "decay_base", "decay_ns", "decay_tolerance", "shape_config",
                  "ismi_base", "ismi_ns", "ismi_exponent", "ismi_exponent_tolerance", "ismi_sweep", "zero_variance_check"},
              "$");
  long trials = positive_int(p, "trials", "$", 100000);
  double zmax = get_number_or(p, "z_threshold", "$", 4.0);
  std::vector<GaussianMeanConfig> cfgs;
  if (p.contains("configs")) {
    const json& a = p.at("configs");
    if (!a.is_array()) throw ConfigInvalid("$.configs", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) cfgs.push_back(gaussian_config_from_json(a[i], "$.configs[" + std::to_string(i) + "]"));
  } else {
    cfgs = default_gaussian_configs();
  }
  std::string csv = csv_row({"config", "shape", "d", "n", "sigma0_sq", "sigmaZ_sq", "sigma_sq", "gamma", "estimate",
                             "std_error", "closed_form", "z_score"});
  json closed = json::array();
  auto emit = [&](std::size_t i, const GaussianMcRow& r) {
    csv += csv_row({std::to_string(i), r.shape == DataShape::Gaussian ? "gaussian" : "two_point", std::to_string(r.cfg.d),
                    std::to_string(r.cfg.n), num(r.cfg.sigma0_sq), num(r.cfg.sigmaZ_sq), num(r.cfg.sigma_sq),
                    num(r.cfg.gamma()), num(r.mc.estimate), num(r.mc.std_error), num(r.closed.gen), num(r.z_score)});
  };
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    GaussianMcRow r = gaussian_mc_row(cfgs[i], trials, ctx.seed + i, DataShape::Gaussian);
    emit(i, r);
    ctx.add("mc_matches_closed_form[" + std::to_string(i) + "]", std::fabs(r.z_score) <= zmax, "z=" + num(r.z_score));
    double g = cfgs[i].gamma();
    bool id = std::fabs(r.closed.iskl / g - r.closed.gen) <= 1e-12 * std::max(1.0, r.closed.gen);
    ctx.add("iskl_over_gamma_equals_gen[" + std::to_string(i) + "]", id,
            "I=" + num(r.closed.mutual) + " L=" + num(r.closed.lautum));
    ctx.add("lautum_ge_mutual[" + std::to_string(i) + "]", r.closed.lautum >= r.closed.mutual);
    json jc = gaussian_config_to_json(cfgs[i]);
    jc["sigma1_sq"] = r.closed.sigma1_sq;
    jc["gen"] = r.closed.gen;
    jc["mutual"] = r.closed.mutual;
    jc["lautum"] = r.closed.lautum;
    jc["iskl"] = r.closed.iskl;
    closed.push_back(jc);
  }
  GaussianMeanConfig shape_cfg =
      p.contains("shape_config") ? gaussian_config_from_json(p.at("shape_config"), "$.shape_config") : cfgs.front();
  GaussianMcRow two = gaussian_mc_row(shape_cfg, trials, ctx.seed + 1000, DataShape::TwoPoint);
  emit(cfgs.size(), two);
  ctx.add("iskl_independent_of_data_shape", std::fabs(two.z_score) <= zmax, "two-point z=" + num(two.z_score));

  if (get_int_or(p, "zero_variance_check", "$", 1)) {
    GaussianMeanConfig zc = shape_cfg;
    zc.sigmaZ_sq = 0.0;
    McEstimate z = mc_mean_gen(zc, 1000, ctx.seed);
    ctx.add("zero_data_variance_gives_zero", z.estimate == 0.0, "estimate=" + num(z.estimate));
  }

  GaussianMeanConfig decay_base =
      p.contains("decay_base") ? gaussian_config_from_json(p.at("decay_base"), "$.decay_base") : cfgs.front();
  std::vector<int> dn = ints_or(p, "decay_ns", "$", {10, 100, 1000, 10000});
  double dtol = get_number_or(p, "decay_tolerance", "$", 0.01);
  std::string dcsv = csv_row({"n", "gen", "gen_n_over_gen_2n"});
  std::vector<DecayPoint> dc = decay_curve(decay_base, dn);
  for (const auto& d : dc) dcsv += csv_row({std::to_string(d.n), num(d.gen), num(d.ratio_to_double)});
  ctx.write("decay.csv", dcsv);
  ctx.add("one_over_n_decay", std::fabs(dc.back().ratio_to_double - 2.0) <= 2.0 * dtol,
          "ratio at n=" + std::to_string(dc.back().n) + ": " + num(dc.back().ratio_to_double));

  GaussianMeanConfig ismi_base =
      p.contains("ismi_base") ? gaussian_config_from_json(p.at("ismi_base"), "$.ismi_base") : cfgs.front();
  std::vector<int> in = ints_or(p, "ismi_ns", "$", {100, 1000, 10000});
  double target = get_number_or(p, "ismi_exponent", "$", 0.5);
  double etol = get_number_or(p, "ismi_exponent_tolerance", "$", 0.1);
  IsmiScan scan = ismi_scan(ismi_base, in);
  std::string icsv = csv_row({"n", "gamma", "gen", "per_sample_mi", "sigma_ell_sq", "eta", "ismi_bound", "ratio"});
  for (const auto& pt : scan.points)
    icsv += csv_row({std::to_string(pt.n), num(pt.gamma), num(pt.gen), num(pt.ismi.per_sample_mi), num(pt.ismi.sigma_ell_sq),
                     num(pt.ismi.eta), num(pt.ismi.bound), num(pt.ratio)});
  ctx.write("ismi.csv", icsv);
  ctx.add("ismi_ratio_exponent", std::fabs(scan.exponent - target) <= etol, "slope=" + num(scan.exponent));

  long sweep = get_int_or(p, "ismi_sweep", "$", 100);
  std::size_t dominated = 0;
  for (long i = 0; i < sweep; ++i) {
    Rng rng(ctx.seed, 5000 + static_cast<std::uint64_t>(i));
    GaussianMeanConfig c;
    c.d = 1 + static_cast<int>(rng() % 4);
    c.n = 2 + static_cast<int>(rng() % 200);
    c.sigma0_sq = 0.1 + 3.0 * rng.uniform();
    c.sigmaZ_sq = 0.1 + 3.0 * rng.uniform();
    c.sigma_sq = 0.1 + 3.0 * rng.uniform();
    c.mu = Eigen::VectorXd::Zero(c.d);
    c.mu0 = Eigen::VectorXd::Constant(c.d, rng.uniform() - 0.5);
    dominated += ismi_bound(c).dominates_gen;
  }
  ctx.add("ismi_bound_dominates_gen", dominated == static_cast<std::size_t>(sweep),
          std::to_string(dominated) + "/" + std::to_string(sweep));
  ctx.write("mc.csv", csv);
  ctx.write("closed_forms.json", closed.dump(2) + "\n");
}

// ---------------------------------------------------------------- bounds-table

TailClass tail_from_json(const json& j, const std::string& path) {
  std::string kind = j.contains("kind") && j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "sub_gaussian") {
    expect_keys(j, {"kind", "sigma"}, path);
    return SubGaussian{get_number(j, "sigma", path)};
  }
  if (kind == "sub_exponential") {
    expect_keys(j, {"kind", "sigma_e_sq", "b"}, path);
    return SubExponential{get_number(j, "sigma_e_sq", path), get_number(j, "b", path)};
  }
  if (kind == "sub_gamma") {
    expect_keys(j, {"kind", "tau_sq", "c_s"}, path);
    return SubGamma{get_number(j, "tau_sq", path), get_number(j, "c_s", path)};
  }
  throw ConfigInvalid(path + ".kind", "expected sub_gaussian, sub_exponential or sub_gamma");
}

void run_bounds(Context& ctx) {
  const json& p = ctx.params;
  expect_keys(p, {"problem", "gammas", "ns", "alphas", "tails"}, "$");
  LearningProblem base;
  if (p.contains("problem")) {
    base = problem_from_json(p.at("problem"), "$.problem");
  } else {
    Rng rng(ctx.seed, 0);
    base = random_problem(rng, true, 3, 4, 1);
  }
  std::vector<double> gammas = vector_or(p, "gammas", "$", {0.1, 1.0, 10.0, 100.0});
  std::vector<int> ns = ints_or(p, "ns", "$", {1, 2, 3, 4});
  std::vector<double> alphas = vector_or(p, "alphas", "$", {1.5, 2.0, 4.0});
  std::string csv = csv_row({"gamma", "n", "gen", "bound_name", "value", "feasible", "regime", "constants_used"});
  std::size_t ok = 0, total = 0;
  for (int n : ns) {
    LearningProblem prob = base;
    prob.n = n;
    if (!prob.iid()) throw ConfigInvalid("$.problem.data", "bounds-table sweeps n and needs an iid data model");
    for (double g : gammas) {
      if (!(g > 0.0)) throw ConfigInvalid("$.gammas", "must be > 0");
      SandwichReport s = bounded_loss_sandwich(prob, g, alphas);
      ++total;
      ok += s.lower_ok && s.upper_ok && s.renyi_ok;
      csv += csv_row({num(g), std::to_string(n), num(s.gen), "tv_lower", num(s.tv_lower), "1", "lower", ""});
      for (const auto& b : s.upper)
        csv += csv_row({num(g), std::to_string(n), num(s.gen), b.name, num(b.value), b.feasible ? "1" : "0", b.regime, b.constants_used});
      for (const auto& [a, v] : s.renyi)
        csv += csv_row({num(g), std::to_string(n), num(s.gen), "renyi", num(v), "1", "alpha>1", "alpha=" + num(a)});
      if (p.contains("tails")) {
        const json& tails = p.at("tails");
        if (!tails.is_array()) throw ConfigInvalid("$.tails", "expected an array");
        RatioConstants rc = ratio_constants(prob, g);
        for (std::size_t t = 0; t < tails.size(); ++t) {
          SuiteInputs in;
          in.gamma = g;
          in.n = n;
          in.tail = tail_from_json(tails[t], "$.tails[" + std::to_string(t) + "]");
          in.ratios = rc;
          in.mutual_info = rc.mutual;
          for (const auto& b : bound_suite(in))
            csv += csv_row({num(g), std::to_string(n), num(s.gen), b.name, num(b.value), b.feasible ? "1" : "0", b.regime,
                            b.constants_used});
        }
      }
    }
  }
  ctx.write("bounds_table.csv", csv);
  ctx.add("sandwich_holds", ok == total, std::to_string(ok) + "/" + std::to_string(total));
}

// ---------------------------------------------------------------- asymptotics

void run_asymptotics(Context& ctx) {
  const json& p = ctx.params;
  expect_keys(p, {"aic_pairs", "aic_n", "well_specified_d", "laplace", "bayes", "wells"}, "$");
  std::size_t pairs = static_cast<std::size_t>(positive_int(p, "aic_pairs", "$", 20));
  double aic_n = get_number_or(p, "aic_n", "$", 100.0);
  json out;
  std::string csv = csv_row({"pair", "d", "n", "trace_form", "eigen_route", "abs_diff"});
  std::vector<AicCheck> aic = aic_random_pairs(pairs, ctx.seed, aic_n);
  bool aic_ok = true;
  for (std::size_t i = 0; i < aic.size(); ++i) {
    double diff = std::fabs(aic[i].value - aic[i].eigen_route);
    aic_ok = aic_ok && diff <= 1e-10 * std::max(1.0, std::fabs(aic[i].eigen_route));
    csv += csv_row({std::to_string(i), std::to_string(aic[i].d), num(aic[i].n), num(aic[i].value), num(aic[i].eigen_route), num(diff)});
  }
  ctx.write("aic.csv", csv);
  ctx.add("aic_trace_matches_eigen_route", aic_ok);

  int wd = static_cast<int>(positive_int(p, "well_specified_d", "$", 3));
  Rng rng(ctx.seed, 9999);
  MleSpec ws = random_spd_pair(rng, wd, aic_n);
  ws.fisher = ws.J;
  double wv = mle_asymptotic_gen(ws);
  ctx.add("well_specified_equals_d_over_n", wv == wd / aic_n, "value=" + num(wv));
  out["aic_well_specified"] = {{"d", wd}, {"n", aic_n}, {"value", wv}};

  json lp = p.contains("laplace") ? p.at("laplace") : json::object();
  expect_keys(lp, {"config", "gamma", "datasets", "tolerance"}, "$.laplace");
  GaussianMeanConfig lc = lp.contains("config") ? gaussian_config_from_json(lp.at("config"), "$.laplace.config")
                                                : default_gaussian_configs().front();
  double lg = get_number_or(lp, "gamma", "$.laplace", 1e4);
  long lds = positive_int(lp, "datasets", "$.laplace", 100000);
  double ltol = get_number_or(lp, "tolerance", "$.laplace", 0.05);
  LaplaceComparison lcmp = laplace_vs_exact(lc, lg, lds, ctx.seed);
  ctx.add("laplace_single_well_within_tolerance", lcmp.rel_gap <= ltol, "rel_gap=" + num(lcmp.rel_gap));
  out["laplace"] = {{"gamma", lg}, {"exact_gen", lcmp.exact_gen}, {"laplace_gen", lcmp.laplace_gen}, {"rel_gap", lcmp.rel_gap}};

  json bp = p.contains("bayes") ? p.at("bayes") : json::object();
  expect_keys(bp, {"n", "sigma0_sq", "mu", "trials", "tolerance"}, "$.bayes");
  int bn = static_cast<int>(positive_int(bp, "n", "$.bayes", 1000));
  BayesRegimeResult br = bayes_regime_mc(bn, get_number_or(bp, "sigma0_sq", "$.bayes", 1.0), get_number_or(bp, "mu", "$.bayes", 0.3),
                                         positive_int(bp, "trials", "$.bayes", 100000), ctx.seed);
  double btol = get_number_or(bp, "tolerance", "$.bayes", 0.1);
  ctx.add("bayes_regime_n_gen_near_d", std::fabs(br.n_gen.estimate - 1.0) <= btol,
          "n*gen=" + num(br.n_gen.estimate) + " se=" + num(br.n_gen.std_error));
  out["bayes"] = {{"n", bn}, {"n_gen", br.n_gen.estimate}, {"std_error", br.n_gen.std_error}, {"exact_n_gen", br.exact_n_gen}};

  if (p.contains("wells")) {
    const json& w = p.at("wells");
    if (!w.is_array()) throw ConfigInvalid("$.wells", "expected an array of wells");
    std::vector<std::vector<WellSample>> wells;
    for (std::size_t i = 0; i < w.size(); ++i) wells.push_back(wells_from_json(w[i], "$.wells[" + std::to_string(i) + "]"));
    out["multi_well_bound"] = multi_well_bound(wells);
  }
  ctx.write("asymptotics.json", out.dump(2) + "\n");
}

// ---------------------------------------------------------------- sgld-demo

void run_sgld(Context& ctx) {
  const json& p = ctx.params;
  expect_keys(p, {"m", "gamma", "step", "iterations", "chains", "mean_se_multiple", "variance_tolerance", "trace"}, "$");
  double m = get_number_or(p, "m", "$", 1.5);
  double gamma = get_number_or(p, "gamma", "$", 4.0);
  double step = get_number_or(p, "step", "$", 1e-3);
  long iters = positive_int(p, "iterations", "$", 100000);
  long chains = positive_int(p, "chains", "$", 100);
  double k = get_number_or(p, "mean_se_multiple", "$", 3.0);
  double vtol = get_number_or(p, "variance_tolerance", "$", 0.05);
  SgldMoments mo = sgld_quadratic_moments(m, gamma, step, iters, chains, ctx.seed);
  std::string csv = csv_row({"quantity", "value", "std_error", "target"});
  csv += csv_row({"mean", num(mo.mean), num(mo.mean_se), num(m)});
  csv += csv_row({"variance", num(mo.variance), num(mo.variance_se), num(mo.target_variance)});
  csv += csv_row({"discrete_stationary_variance", num(mo.discrete_variance), "", num(mo.target_variance)});
  ctx.write("sgld_moments.csv", csv);
  ctx.add("sgld_mean_within_se", std::fabs(mo.mean - m) <= k * mo.mean_se, "mean=" + num(mo.mean) + " se=" + num(mo.mean_se));
  ctx.add("sgld_variance_within_tolerance", std::fabs(mo.variance - mo.target_variance) <= vtol * mo.target_variance,
          "variance=" + num(mo.variance));

  Gradient grad = [m](const Eigen::VectorXd& w, const Eigen::MatrixXd&) -> Eigen::VectorXd { return 2.0 * (w.array() - m).matrix(); };
  SgldConfig cfg = SgldConfig::with_default_burn_in(step, gamma, iters, ctx.seed);
  Eigen::MatrixXd a = sgld_run(grad, Eigen::VectorXd::Constant(1, m), cfg, Eigen::MatrixXd());
  Eigen::MatrixXd b = sgld_run(grad, Eigen::VectorXd::Constant(1, m), cfg, Eigen::MatrixXd());
  ctx.add("sgld_seed_determinism", a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  if (get_int_or(p, "trace", "$", 0)) {
    std::string tr = csv_row({"iteration", "w0"});
    for (Eigen::Index i = 0; i < a.cols(); ++i) tr += csv_row({std::to_string(cfg.burn_in + i + 1), num(a(0, i))});
    ctx.write("sgld_trace.csv", tr);
  }
}

// ---------------------------------------------------------------- pac-bayes

void run_pac(Context& ctx) {
  const json& p = ctx.params;
  expect_keys(p, {"parameter_sets", "coverage", "deltas", "trials"}, "$");
  std::string csv = csv_row({"set", "sigma", "gamma", "n", "prime_shift", "delta", "c_p", "epsilon", "bound"});
  json sets = p.contains("parameter_sets") ? p.at("parameter_sets")
                                           : json::array({json{{"sigma", 1.0}, {"gamma", 1.0}, {"n", 100}, {"delta", 0.05}}});
  if (!sets.is_array()) throw ConfigInvalid("$.parameter_sets", "expected an array");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::string path = "$.parameter_sets[" + std::to_string(i) + "]";
    expect_keys(sets[i], {"sigma", "gamma", "n", "prime_shift", "delta", "c_p"}, path);
    PacBayesInputs in{get_number(sets[i], "sigma", path),       get_number(sets[i], "gamma", path),
                      get_number(sets[i], "n", path),           get_number_or(sets[i], "prime_shift", path, 0.0),
                      get_number_or(sets[i], "delta", path, 0.05), get_number_or(sets[i], "c_p", path, 0.0)};
    double b = pac_bayes_bound(in);
    csv += csv_row({std::to_string(i), num(in.sigma), num(in.gamma), num(in.n), num(in.prime_shift), num(in.delta), num(in.c_p),
                    num(pac_bayes_epsilon(in.sigma, in.n, in.delta)), num(b)});
  }
  ctx.write("pac_bayes_bounds.csv", csv);

  json cj = p.contains("coverage") ? p.at("coverage") : json::object();
  expect_keys(cj, {"mu", "sigmaZ_sq", "n", "gamma", "cap", "grid_lo", "grid_hi", "grid_points"}, "$.coverage");
  PacCoverageConfig cc;
  cc.mu = get_number_or(cj, "mu", "$.coverage", cc.mu);
  cc.sigmaZ_sq = get_number_or(cj, "sigmaZ_sq", "$.coverage", cc.sigmaZ_sq);
  cc.n = static_cast<int>(positive_int(cj, "n", "$.coverage", cc.n));
  cc.gamma = get_number_or(cj, "gamma", "$.coverage", cc.gamma);
  cc.cap = get_number_or(cj, "cap", "$.coverage", cc.cap);
  cc.grid_lo = get_number_or(cj, "grid_lo", "$.coverage", cc.grid_lo);
  cc.grid_hi = get_number_or(cj, "grid_hi", "$.coverage", cc.grid_hi);
  cc.grid_points = static_cast<int>(positive_int(cj, "grid_points", "$.coverage", cc.grid_points));
  std::vector<double> deltas = vector_or(p, "deltas", "$", {0.05, 0.1});
  long trials = positive_int(p, "trials", "$", 10000);
  std::string cov = csv_row({"delta", "trials", "coverage", "required", "mean_bound", "mean_gap", "mean_c_p"});
  double prev_bound = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (double d : deltas) {
    PacCoverage c = pac_bayes_coverage(cc, d, trials, ctx.seed);
    cov += csv_row({num(d), std::to_string(c.trials), num(c.coverage), num(1.0 - 2.0 * d), num(c.mean_bound), num(c.mean_gap),
                    num(c.mean_c_p)});
    ctx.add("coverage_delta=" + num(d), c.coverage >= 1.0 - 2.0 * d, "coverage=" + num(c.coverage));
    monotone = monotone && c.mean_bound <= prev_bound;
    prev_bound = c.mean_bound;
  }
  ctx.write("pac_bayes_coverage.csv", cov);
  ctx.add("bound_decreases_in_delta", monotone);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs algorithm generalization laboratory"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  std::uint64_t seed = 7;
  std::map<std::string, void (*)(Context&)> runners = {
      {"verify-identities", run_verify}, {"counterexample", run_counterexample}, {"gaussian-mean", run_gaussian},
      {"bounds-table", run_bounds},      {"asymptotics", run_asymptotics},      {"sgld-demo", run_sgld},
      {"pac-bayes", run_pac}};
  std::map<std::string, std::string> help = {
      {"verify-identities", "randomized identity, sandwich, proposition, monotonicity and concavity sweep"},
      {"counterexample", "chain-rule counterexample for each epsilon"},
      {"gaussian-mean", "closed forms, Monte Carlo, decay and ISMI table for the Gaussian mean problem"},
      {"bounds-table", "exact gen against every bound across gamma and n grids"},
      {"asymptotics", "AIC trace form, Laplace limit and Bayesian regime"},
      {"sgld-demo", "SGLD stationary moments on a quadratic"},
      {"pac-bayes", "PAC-Bayes bound values and empirical coverage"}};
  for (const auto& [name, fn] : runners) {
    CLI::App* sub = app.add_subcommand(name, help[name]);
    sub->add_option("--config", config_path, "JSON parameter file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "64-bit seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  std::string command = app.get_subcommands().front()->get_name();
  Context ctx;
  ctx.seed = seed;
  ctx.out = out_dir;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigInvalid("--config", "cannot open " + config_path);
      try {
        ctx.params = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ConfigInvalid("--config", e.what());
      }
    } else {
      ctx.params = json::object();
    }
    if (!ctx.params.is_object()) throw ConfigInvalid("$", "expected an object");
    fs::create_directories(ctx.out);
    runners.at(command)(ctx);
  } catch (const ConfigInvalid& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return e.numerical() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return 3;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest;
  manifest["command"] = command;
  manifest["config"] = ctx.params;
  manifest["seed"] = ctx.seed;
  manifest["artifact_version"] = kVersion;
  manifest["duration_seconds"] = secs;
  json checks = json::array();
  std::size_t passed = 0;
  for (const auto& c : ctx.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    passed += c.passed;
  }
  manifest["checks"] = checks;
  manifest["summary"] = {{"passed", passed}, {"total", ctx.checks.size()}};
  ctx.write("manifest.json", manifest.dump(2) + "\n");
  for (const auto& c : ctx.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
  std::cout << passed << "/" << ctx.checks.size() << " checks passed\n";
  return passed == ctx.checks.size() ? 0 : 1;
}
