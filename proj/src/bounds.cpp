#include "gibbs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace gibbs {

namespace {

std::string fmt_constant(const char* name, double v) {
  std::ostringstream os;
  os.precision(12);
  os << name << "=" << v;
  return os.str();
}

void check_common(double gamma, double n, double c) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw GammaNonPositive(gamma);
  if (!(n >= 1.0)) throw ConfigInvalid("n", "must be >= 1");
  if (!(c >= 0.0)) throw ConfigInvalid("c_ratio", "must be >= 0");
}

// ln sum_i w_i e^{e_i} for weights summing to 1.
double log_weighted_exp(const std::vector<double>& w, const std::vector<double>& e) {
  double emax = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) emax = std::max(emax, std::fabs(e[i]));
  if (emax < 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] > 0.0) s += w[i] * std::expm1(e[i]);
    return std::log1p(s);
  }
  std::vector<double> l;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) l.push_back(std::log(w[i]) + e[i]);
  return log_sum_exp(l);
}

struct Cells {
  std::vector<double> p, q, x;  // joint, product, ln(p/q)
};

Cells joint_cells(const LearningProblem& problem, double gamma) {
  Enumeration e = enumerate(problem);
  GibbsPosterior post = gibbs_from_energy(problem.prior, e.emp, gamma);
  ProbVec pw = channel_output(e.ps, post.rows);
  Cells c;
  for (std::size_t s = 0; s < e.ps.size(); ++s) {
    if (e.ps[s] <= kZeroProb) continue;
    for (std::size_t w = 0; w < pw.size(); ++w) {
      c.p.push_back(e.ps[s] * post.rows[s][w]);
      c.q.push_back(e.ps[s] * pw[w]);
      c.x.push_back(post.rows[s].log_at(w) - pw.log_at(w));
    }
  }
  return c;
}

}  // namespace

void validate_tail(const TailClass& tail) {
  std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SubGaussian>) {
          if (!(t.sigma > 0.0)) throw ConfigInvalid("tail.sigma", "must be > 0");
        } else if constexpr (std::is_same_v<T, SubExponential>) {
          if (!(t.sigma_e_sq > 0.0) || !(t.b > 0.0)) throw ConfigInvalid("tail", "sigma_e_sq and b must be > 0");
        } else {
          if (!(t.tau_sq > 0.0) || !(t.c_s > 0.0)) throw ConfigInvalid("tail", "tau_sq and c_s must be > 0");
        }
      },
      tail);
}

std::string tail_name(const TailClass& tail) {
  switch (tail.index()) {
    case 0: return "sub_gaussian";
    case 1: return "sub_exponential";
    default: return "sub_gamma";
  }
}

double sub_exponential_branch(const SubExponential& t) { return t.sigma_e_sq / (2.0 * t.b * t.b); }

double psi_star_inverse(const TailClass& tail, double y) {
  validate_tail(tail);
  if (!(y >= 0.0)) throw ConfigInvalid("y", "must be >= 0");
  if (const auto* g = std::get_if<SubGaussian>(&tail)) return std::sqrt(2.0 * g->sigma * g->sigma * y);
  if (const auto* e = std::get_if<SubExponential>(&tail)) {
    if (y <= sub_exponential_branch(*e)) return std::sqrt(2.0 * e->sigma_e_sq * y);
    return e->b * y + e->sigma_e_sq / (2.0 * e->b);
  }
  const auto& gm = std::get<SubGamma>(tail);
  return std::sqrt(2.0 * gm.tau_sq * y) + gm.c_s * y;
}

double fixed_point_kappa_bisect(const TailClass& tail, double gamma, double n, double c) {
  check_common(gamma, n, c);
  validate_tail(tail);
  if (const auto* gm = std::get_if<SubGamma>(&tail)) {
    if (!(n > gm->c_s * gamma / (1.0 + c)))
      throw NoPositiveRoot("sub-Gamma fixed point needs n > c_s*gamma/(1+C)");
  }
  auto f = [&](double u) { return psi_star_inverse(tail, u / n) - (1.0 + c) * u / gamma; };
  double lo = 1e-30;
  if (!(f(lo) > 0.0)) throw NoPositiveRoot("fixed-point function is not positive near zero");
  double hi = 10.0 * n * std::max(1.0, gamma);
  int doublings = 0;
  while (f(hi) >= 0.0) {
    if (++doublings > 60) throw NoPositiveRoot("no sign change after 60 bracket doublings");
    hi *= 2.0;
  }
  double a = std::log(lo), b = std::log(hi);
  for (int it = 0; it < 400 && b - a > 1e-14; ++it) {
    double m = 0.5 * (a + b);
    if (f(std::exp(m)) > 0.0)
      a = m;
    else
      b = m;
  }
  return std::exp(0.5 * (a + b));
}

double fixed_point_kappa(const TailClass& tail, double gamma, double n, double c) {
  check_common(gamma, n, c);
  validate_tail(tail);
  if (const auto* g = std::get_if<SubGaussian>(&tail))
    return 2.0 * g->sigma * g->sigma * gamma * gamma / (n * (1.0 + c) * (1.0 + c));
  return fixed_point_kappa_bisect(tail, gamma, n, c);
}

RatioConstants ratio_constants(const LearningProblem& problem, double gamma) {
  RatioConstants r;
  r.iid = problem.iid();
  if (gamma == 0.0) {
    r.degenerate = true;
    return r;
  }
  PropositionCompare pc = proposition_compare(problem, gamma);
  r.mutual = pc.mutual;
  r.lautum = pc.lautum;
  r.d_fwd = pc.d_fwd;
  r.d_rev = pc.d_rev;
  if (pc.mutual <= kZeroProb || pc.d_fwd <= kZeroProb) {
    r.degenerate = true;
    return r;
  }
  r.c_i = pc.lautum / pc.mutual;
  r.c_k = pc.d_rev / pc.d_fwd;
  if (r.iid) {
    try {
      CmiDetail cd = cmi_detail(problem, gamma);
      if (cd.info.mutual > kZeroProb) r.c_c = cd.info.lautum / cd.info.mutual;
    } catch (const EnumerationTooLarge&) {
      r.c_c = 0.0;
    }
    ReplaceOneDetail ro = replace_one_detail(problem, gamma);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ro.forward.size(); ++i)
      if (ro.forward[i] > kZeroProb) m = std::min(m, ro.reverse[i] / ro.forward[i]);
    r.c_s_ratio = std::isfinite(m) ? m : 0.0;
  }
  return r;
}

std::vector<BoundEntry> bound_suite(const SuiteInputs& in) {
  check_common(in.gamma, in.n, 0.0);
  validate_tail(in.tail);
  const double g = in.gamma, n = in.n;
  const RatioConstants& rc = in.ratios;
  std::vector<BoundEntry> out;
  auto add = [&](std::string name, double v, bool feasible, std::string regime, std::string consts) {
    out.push_back({std::move(name), feasible ? v : std::numeric_limits<double>::quiet_NaN(), feasible,
                   std::move(regime), std::move(consts)});
  };

  if (const auto* sg = std::get_if<SubGaussian>(&in.tail)) {
    double s2 = sg->sigma * sg->sigma;
    add("sub_gaussian_ci", 2.0 * s2 * g / ((1.0 + rc.c_i) * n), true, "left_tail", fmt_constant("C_I", rc.c_i));
    add("sub_gaussian_ck", 2.0 * s2 * g / ((1.0 + rc.c_k) * n), true, "two_sided", fmt_constant("C_K", rc.c_k));
  } else if (const auto* se = std::get_if<SubExponential>(&in.tail)) {
    double a = (1.0 + rc.c_i) * n;
    double r1 = 2.0 * se->sigma_e_sq * g / a;
    bool r2_ok = a > g * se->b;
    double r2 = se->sigma_e_sq / (2.0 * se->b) * (a / (a - g * se->b));
    if (in.mutual_info) {
      bool first = n >= 2.0 * se->b * se->b * *in.mutual_info / se->sigma_e_sq;
      if (first)
        add("sub_exponential", r1, true, "quadratic", fmt_constant("C_I", rc.c_i));
      else
        add("sub_exponential", r2, r2_ok, r2_ok ? "linear" : "linear_infeasible", fmt_constant("C_I", rc.c_i));
    } else {
      add("sub_exponential_quadratic", r1, true, "quadratic", fmt_constant("C_I", rc.c_i));
      add("sub_exponential_linear", r2, r2_ok, r2_ok ? "linear" : "linear_infeasible", fmt_constant("C_I", rc.c_i));
    }
  } else {
    const auto& gm = std::get<SubGamma>(in.tail);
    double a = (1.0 + rc.c_i) * n;
    bool ok = a > g * gm.c_s;
    double v = 2.0 * gm.tau_sq * g * a / ((a - g * gm.c_s) * (a - g * gm.c_s));
    add("sub_gamma", v, ok, ok ? "feasible" : "n_too_small", fmt_constant("C_I", rc.c_i));
  }

  try {
    double kappa = fixed_point_kappa(in.tail, g, n, rc.c_i);
    add("fixed_point", (1.0 + rc.c_i) * kappa / g, true, tail_name(in.tail), fmt_constant("C_I", rc.c_i));
  } catch (const NoPositiveRoot& e) {
    add("fixed_point", 0.0, false, e.what(), fmt_constant("C_I", rc.c_i));
  }

  if (in.width) {
    double w = *in.width;
    add("bounded_cc", w * w * g / ((1.0 + rc.c_c) * n), true, "bounded", fmt_constant("C_C", rc.c_c));
  }
  if (in.tau) {
    double t2 = *in.tau * *in.tau;
    add("conditional_sub_gaussian_cs", 4.0 * t2 * g / ((1.0 + rc.c_s_ratio) * n), true, "per_dataset",
        fmt_constant("C_S", rc.c_s_ratio));
  }
  return out;
}

double tv_lower_bound(const LearningProblem& problem, double gamma) {
  if (!(gamma > 0.0)) throw GammaNonPositive(gamma);
  Cells c = joint_cells(problem, gamma);
  std::vector<double> t(c.p.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = c.q[i] * std::fabs(std::expm1(c.x[i]));
  double tv = 0.0;
  for (double v : t) tv += v;
  return tv * tv / gamma;
}

double renyi_upper_bound(const LearningProblem& problem, double gamma, double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw AlphaOutOfRange(alpha);
  if (!(gamma > 0.0)) throw GammaNonPositive(gamma);
  Cells c = joint_cells(problem, gamma);
  double xmax = 0.0;
  for (double x : c.x) xmax = std::max(xmax, std::fabs(x));
  if (alpha * xmax > 600.0) {
    std::vector<double> ef(c.x.size()), er(c.x.size());
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      ef[i] = (alpha - 1.0) * c.x[i];
      er[i] = -(alpha - 1.0) * c.x[i];
    }
    double fwd = std::max(0.0, log_weighted_exp(c.p, ef) / (alpha - 1.0));
    double rev = std::max(0.0, log_weighted_exp(c.q, er) / (alpha - 1.0));
    return (fwd + rev) / gamma;
  }
  std::vector<double> sf(c.x.size()), sr(c.x.size());
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    sf[i] = c.q[i] * renyi_term(c.x[i], alpha);
    sr[i] = c.p[i] * renyi_term(-c.x[i], alpha);
  }
  double fwd = std::log1p(std::accumulate(sf.begin(), sf.end(), 0.0)) / (alpha - 1.0);
  double rev = std::log1p(std::accumulate(sr.begin(), sr.end(), 0.0)) / (alpha - 1.0);
  return (std::max(0.0, fwd) + std::max(0.0, rev)) / gamma;
}

double kl_based_bound(const LearningProblem& problem, double gamma, double sigma) {
  if (!problem.iid()) throw NotIID("KL-based bound");
  if (!(sigma > 0.0)) throw ConfigInvalid("sigma", "must be > 0");
  PropositionCompare pc = proposition_compare(problem, gamma);
  return std::sqrt(2.0 * sigma * sigma * pc.d_fwd / problem.n);
}

SandwichReport bounded_loss_sandwich(const LearningProblem& problem, double gamma,
                                     const std::vector<double>& alphas) {
  SandwichReport r;
  GibbsPosterior post = gibbs_posterior(problem, gamma);
  r.gen = gen_error_direct(problem, post);
  r.tv_lower = tv_lower_bound(problem, gamma);
  r.lower_ok = r.tv_lower <= r.gen + 1e-10 && r.tv_lower <= 4.0 / gamma;
  double lo = problem.loss.minCoeff(), hi = problem.loss.maxCoeff();
  double width = hi - lo;
  double sigma = width / 2.0;
  auto slack = [&](double v) { return 1e-12 + 1e-10 * std::fabs(v); };

  if (problem.iid() && sigma > 0.0) {
    SuiteInputs in;
    in.gamma = gamma;
    in.n = problem.n;
    in.tail = SubGaussian{sigma};
    in.ratios = ratio_constants(problem, gamma);
    in.mutual_info = in.ratios.mutual;
    in.tau = sigma;
    in.width = width;
    r.upper = bound_suite(in);
    r.upper.push_back({"kl_based", kl_based_bound(problem, gamma, sigma), true, "sub_gaussian",
                       fmt_constant("sigma", sigma)});
  } else if (!problem.iid()) {
    r.upper.push_back({"parametric", std::numeric_limits<double>::quiet_NaN(), false, "requires_iid", ""});
  }
  for (const auto& b : r.upper)
    if (b.feasible && b.value < r.gen - slack(r.gen)) r.upper_ok = false;
  for (double a : alphas) {
    double v = renyi_upper_bound(problem, gamma, a);
    r.renyi[a] = v;
    if (v < r.gen - slack(r.gen)) r.renyi_ok = false;
  }
  return r;
}

}  // namespace gibbs
