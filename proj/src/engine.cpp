#include "gibbs/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbs/parallel.hpp"

namespace gibbs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double ordered_sum(const std::vector<double>& v) {
  // fixed-order pairwise reduction
  std::vector<double> cur = v;
  while (cur.size() > 1) {
    std::vector<double> next((cur.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = cur[2 * i] + (2 * i + 1 < cur.size() ? cur[2 * i + 1] : 0.0);
    cur.swap(next);
  }
  return cur.empty() ? 0.0 : cur[0];
}

double count_tuples(std::size_t alphabet, int n) { return std::pow(static_cast<double>(alphabet), n); }

std::vector<int> decode(std::size_t index, std::size_t alphabet, int len) {
  std::vector<int> z(len);
  for (int i = len - 1; i >= 0; --i) {
    z[i] = static_cast<int>(index % alphabet);
    index /= alphabet;
  }
  return z;
}

Eigen::MatrixXd empirical_table(const Eigen::MatrixXd& loss, const std::vector<Dataset>& ds) {
  Eigen::MatrixXd emp(loss.rows(), static_cast<Eigen::Index>(ds.size()));
  for (std::size_t d = 0; d < ds.size(); ++d) {
    for (Eigen::Index w = 0; w < loss.rows(); ++w) {
      double s = 0.0;
      for (int z : ds[d].z) s += loss(w, z);
      emp(w, static_cast<Eigen::Index>(d)) = s / static_cast<double>(ds[d].z.size());
    }
  }
  return emp;
}

// E_{P_W x P_S}[F] - E_{P_{W,S}}[F], accumulated from per-cell differences
// P_W(w) - P(w|s) = -P_W(w) expm1(ln P(w|s) - ln P_W(w)).
// Where both P(w|s) and P_W(w) exceed 1/2 the difference is taken between
// complements, each summed from the small entries of its row.
double delta_expectation(const ProbVec& ps, const CondTable& rows, const Eigen::MatrixXd& f) {
  ProbVec pw = channel_output(ps, rows);
  std::size_t dom = pw.size();
  for (std::size_t w = 0; w < pw.size(); ++w)
    if (pw[w] > 0.5) dom = w;
  std::vector<double> comp(ps.size(), 0.0);
  double comp_w = 0.0;
  if (dom < pw.size()) {
    std::vector<double> cw(ps.size(), 0.0);
    for (std::size_t s = 0; s < ps.size(); ++s) {
      std::vector<double> others;
      others.reserve(pw.size());
      for (std::size_t w = 0; w < pw.size(); ++w)
        if (w != dom) others.push_back(rows[s][w]);
      comp[s] = ordered_sum(others);
      cw[s] = ps[s] * comp[s];
    }
    comp_w = ordered_sum(cw);
  }
  std::vector<double> terms(ps.size(), 0.0);
  for (std::size_t s = 0; s < ps.size(); ++s) {
    if (ps[s] <= kZeroProb) continue;
    double acc = 0.0;
    for (std::size_t w = 0; w < pw.size(); ++w) {
      double diff;
      if (w == dom && rows[s][w] > 0.5)
        diff = comp[s] - comp_w;
      else if (pw[w] <= kZeroProb)
        diff = -rows[s][w];
      else if (rows[s][w] <= kZeroProb)
        diff = pw[w];
      else
        diff = -pw[w] * std::expm1(rows[s].log_at(w) - pw.log_at(w));
      acc += diff * f(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(s));
    }
    terms[s] = ps[s] * acc;
  }
  return ordered_sum(terms);
}

struct DirectedPair {
  double fwd = 0.0;  // D(a || b)
  double rev = 0.0;  // D(b || a)
};

DirectedPair directed(const ProbVec& a, const ProbVec& b) {
  DirectedPair out;
  for (std::size_t w = 0; w < a.size(); ++w) {
    bool az = a[w] <= kZeroProb, bz = b[w] <= kZeroProb;
    if (az && bz) continue;
    if (az || bz) throw AbsoluteContinuityViolation(w, az ? "reverse" : "forward");
    double x = a.log_at(w) - b.log_at(w);
    out.fwd += b[w] * kl_forward_term(x);
    out.rev += b[w] * kl_reverse_term(x);
  }
  return out;
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw GammaNonPositive(gamma);
}

}  // namespace

void LearningProblem::validate() const {
  if (n < 1) throw ConfigInvalid("n", "must be >= 1");
  if (loss.rows() == 0 || loss.cols() == 0) throw ConfigInvalid("loss", "empty table");
  for (Eigen::Index i = 0; i < loss.rows(); ++i)
    for (Eigen::Index j = 0; j < loss.cols(); ++j)
      if (!std::isfinite(loss(i, j)) || loss(i, j) < 0.0)
        throw ConfigInvalid("loss", "entries must be finite and nonnegative");
  if (!hypotheses.empty() && hypotheses.size() != num_w()) throw AlphabetMismatch(hypotheses.size(), num_w());
  if (!samples.empty() && samples.size() != num_z()) throw AlphabetMismatch(samples.size(), num_z());
  if (prior.size() != num_w()) throw AlphabetMismatch(prior.size(), num_w());
  for (std::size_t w = 0; w < prior.size(); ++w)
    if (prior[w] <= kZeroProb) throw ConfigInvalid("prior", "must be strictly positive");
  if (const auto* iid = std::get_if<IidData>(&data)) {
    if (iid->pz.size() != num_z()) throw AlphabetMismatch(iid->pz.size(), num_z());
  } else {
    const auto& jd = std::get<JointData>(data);
    double want = count_tuples(num_z(), n);
    if (static_cast<double>(jd.ps.size()) != want)
      throw ConfigInvalid("data.joint", "expected " + std::to_string(static_cast<long long>(want)) + " tuple weights");
  }
}

std::size_t dataset_index(const std::vector<int>& z, std::size_t alphabet) {
  std::size_t idx = 0;
  for (int v : z) idx = idx * alphabet + static_cast<std::size_t>(v);
  return idx;
}

ProbVec dataset_law(const DataModel& data, std::size_t alphabet, int n, double cap) {
  double count = count_tuples(alphabet, n);
  if (count > cap) throw EnumerationTooLarge(count, cap);
  if (const auto* jd = std::get_if<JointData>(&data)) {
    if (static_cast<double>(jd->ps.size()) != count)
      throw AlphabetMismatch(jd->ps.size(), static_cast<std::size_t>(count));
    return jd->ps;
  }
  const ProbVec& pz = std::get<IidData>(data).pz;
  if (pz.size() != alphabet) throw AlphabetMismatch(pz.size(), alphabet);
  std::size_t total = static_cast<std::size_t>(count);
  std::vector<double> lp(total);
  for (std::size_t t = 0; t < total; ++t) {
    double acc = 0.0;
    for (int z : decode(t, alphabet, n)) acc += pz.log_at(z);
    lp[t] = acc;
  }
  return ProbVec::from_log(std::move(lp));
}

std::vector<Dataset> enumerate_datasets(const LearningProblem& problem, double cap) {
  ProbVec law = dataset_law(problem.data, problem.num_z(), problem.n, cap);
  std::vector<Dataset> out(law.size());
  for (std::size_t t = 0; t < law.size(); ++t) {
    out[t].z = decode(t, problem.num_z(), problem.n);
    out[t].prob = law[t];
    out[t].log_prob = law.log_at(t);
  }
  return out;
}

Enumeration enumerate(const LearningProblem& problem, double cap) {
  problem.validate();
  Enumeration e;
  e.ps = dataset_law(problem.data, problem.num_z(), problem.n, cap);
  e.datasets.resize(e.ps.size());
  for (std::size_t t = 0; t < e.ps.size(); ++t) {
    e.datasets[t].z = decode(t, problem.num_z(), problem.n);
    e.datasets[t].prob = e.ps[t];
    e.datasets[t].log_prob = e.ps.log_at(t);
  }
  e.emp = empirical_table(problem.loss, e.datasets);
  Eigen::VectorXd ps(static_cast<Eigen::Index>(e.ps.size()));
  for (std::size_t t = 0; t < e.ps.size(); ++t) ps(static_cast<Eigen::Index>(t)) = e.ps[t];
  e.pop = e.emp * ps;
  return e;
}

GibbsPosterior gibbs_from_energy(const ProbVec& prior, const Eigen::MatrixXd& energy, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw GammaNonPositive(gamma);
  if (static_cast<std::size_t>(energy.rows()) != prior.size())
    throw AlphabetMismatch(static_cast<std::size_t>(energy.rows()), prior.size());
  GibbsPosterior post;
  post.gamma = gamma;
  std::size_t nd = static_cast<std::size_t>(energy.cols());
  post.rows.resize(nd);
  post.log_partition.resize(nd);
  parallel_for(nd, [&](std::size_t d) {
    std::vector<double> lw(prior.size());
    for (std::size_t w = 0; w < prior.size(); ++w)
      lw[w] = prior.log_at(w) - gamma * energy(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(d));
    post.log_partition[d] = log_sum_exp(lw);
    post.rows[d] = ProbVec::from_log(std::move(lw));
  });
  return post;
}

GibbsPosterior gibbs_posterior(const LearningProblem& problem, double gamma, double cap) {
  Enumeration e = enumerate(problem, cap);
  return gibbs_from_energy(problem.prior, e.emp, gamma);
}

JointTable joint_distribution(const LearningProblem& problem, const GibbsPosterior& posterior) {
  ProbVec ps = dataset_law(problem.data, problem.num_z(), problem.n,
                           std::numeric_limits<double>::infinity());
  if (ps.size() != posterior.rows.size()) throw AlphabetMismatch(ps.size(), posterior.rows.size());
  std::size_t nw = problem.num_w();
  std::vector<double> lp(nw * ps.size());
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t s = 0; s < ps.size(); ++s) lp[w * ps.size() + s] = ps.log_at(s) + posterior.rows[s].log_at(w);
  return JointTable::from_log(nw, ps.size(), std::move(lp));
}

double gen_under(const ProbVec& ps, const Eigen::MatrixXd& emp, const CondTable& rows) {
  return delta_expectation(ps, rows, emp);
}

double gen_error_direct(const LearningProblem& problem, const GibbsPosterior& posterior) {
  if (posterior.gamma == 0.0) return 0.0;
  Enumeration e = enumerate(problem, std::numeric_limits<double>::infinity());
  return gen_under(e.ps, e.emp, posterior.rows);
}

ProbVec population_gibbs(const LearningProblem& problem, double gamma) {
  if (!(gamma >= 0.0)) throw GammaNonPositive(gamma);
  Enumeration e = enumerate(problem);
  std::vector<double> lw(problem.num_w());
  for (std::size_t w = 0; w < lw.size(); ++w) lw[w] = problem.prior.log_at(w) - gamma * e.pop(static_cast<Eigen::Index>(w));
  return ProbVec::from_log(std::move(lw));
}

CmiDetail cmi_detail(const LearningProblem& problem, double gamma, double cap) {
  require_gamma(gamma);
  if (!problem.iid()) throw NotIID("conditional symmetrized KL form");
  std::size_t k = problem.num_z();
  int n = problem.n;
  double need = count_tuples(k, 2 * n) * std::pow(2.0, n);
  if (need > cap) throw EnumerationTooLarge(need, cap);
  Enumeration e = enumerate(problem);
  GibbsPosterior post = gibbs_from_energy(problem.prior, e.emp, gamma);
  const ProbVec& pz = std::get<IidData>(problem.data).pz;
  std::size_t nsuper = static_cast<std::size_t>(count_tuples(k, 2 * n));
  std::size_t nsel = std::size_t{1} << n;
  ProbVec sel = ProbVec::uniform(nsel);
  std::vector<double> ti(nsuper, 0.0), tl(nsuper, 0.0);
  parallel_for(nsuper, [&](std::size_t t) {
    std::vector<int> sup = decode(t, k, 2 * n);
    double lp = 0.0;
    for (int z : sup) lp += pz.log_at(z);
    double p = std::exp(lp);
    if (p <= kZeroProb) return;
    CondTable rows(nsel);
    std::vector<int> s(n);
    for (std::size_t u = 0; u < nsel; ++u) {
      for (int i = 0; i < n; ++i) s[i] = sup[2 * i + ((u >> i) & 1u)];
      rows[u] = post.rows[dataset_index(s, k)];
    }
    InfoReport r = channel_info(sel, rows);
    ti[t] = p * r.mutual;
    tl[t] = p * r.lautum;
  });
  CmiDetail out;
  out.info.mutual = ordered_sum(ti);
  out.info.lautum = ordered_sum(tl);
  out.info.symmetrized = out.info.mutual + out.info.lautum;
  out.gen = 2.0 * out.info.symmetrized / gamma;
  return out;
}

ReplaceOneDetail replace_one_detail(const LearningProblem& problem, double gamma, double cap) {
  require_gamma(gamma);
  if (!problem.iid()) throw NotIID("replace-one form");
  Enumeration e = enumerate(problem, cap);
  GibbsPosterior post = gibbs_from_energy(problem.prior, e.emp, gamma);
  const ProbVec& pz = std::get<IidData>(problem.data).pz;
  std::size_t k = problem.num_z();
  int n = problem.n;
  std::size_t nd = e.datasets.size();
  ReplaceOneDetail out;
  out.forward.assign(n, 0.0);
  out.reverse.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> tf(nd, 0.0), tr(nd, 0.0);
    parallel_for(nd, [&](std::size_t s) {
      if (e.ps[s] <= kZeroProb) return;
      std::vector<int> z = e.datasets[s].z;
      double af = 0.0, ar = 0.0;
      for (std::size_t v = 0; v < k; ++v) {
        if (pz[v] <= kZeroProb) continue;
        z[i] = static_cast<int>(v);
        DirectedPair d = directed(post.rows[s], post.rows[dataset_index(z, k)]);
        af += pz[v] * d.fwd;
        ar += pz[v] * d.rev;
      }
      tf[s] = e.ps[s] * af;
      tr[s] = e.ps[s] * ar;
    });
    out.forward[i] = ordered_sum(tf);
    out.reverse[i] = ordered_sum(tr);
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += out.forward[i] + out.reverse[i];
  out.gen = total / (2.0 * gamma);
  return out;
}

GenReport gen_characterizations(const LearningProblem& problem, double gamma, const CharacterizationOptions& opts) {
  require_gamma(gamma);
  Enumeration e = enumerate(problem, opts.cap);
  GibbsPosterior post = gibbs_from_energy(problem.prior, e.emp, gamma);
  GenReport r;
  r.direct = gen_under(e.ps, e.emp, post.rows);
  r.info = channel_info(e.ps, post.rows);
  r.via_iskl = r.info.symmetrized / gamma;

  std::vector<double> lq(problem.num_w());
  for (std::size_t w = 0; w < lq.size(); ++w) lq[w] = problem.prior.log_at(w) - gamma * e.pop(static_cast<Eigen::Index>(w));
  ProbVec q = ProbVec::from_log(std::move(lq));
  std::vector<double> terms(e.ps.size(), 0.0);
  for (std::size_t s = 0; s < e.ps.size(); ++s) {
    if (e.ps[s] <= kZeroProb) continue;
    DirectedPair d = directed(post.rows[s], q);
    terms[s] = e.ps[s] * (d.fwd + d.rev);
  }
  r.via_skl_div = ordered_sum(terms) / gamma;

  if (problem.iid()) {
    double need = count_tuples(problem.num_z(), 2 * problem.n) * std::pow(2.0, problem.n);
    if (opts.cmi && need <= opts.cmi_cap) r.via_cmi = cmi_detail(problem, gamma, opts.cmi_cap).gen;
    if (opts.replace_one) r.via_replace_one = replace_one_detail(problem, gamma, opts.cap).gen;
  }
  return r;
}

bool agrees(double a, double reference, double rel, double abs_tol) {
  if (!std::isfinite(a) || !std::isfinite(reference)) return false;
  if (std::fabs(reference) < 1e-9) return std::fabs(a - reference) <= abs_tol;
  return std::fabs(a - reference) <= rel * std::fabs(reference);
}

bool report_consistent(const GenReport& r, double rel, double abs_tol) {
  bool ok = agrees(r.via_iskl, r.direct, rel, abs_tol) && agrees(r.via_skl_div, r.direct, rel, abs_tol);
  if (r.via_cmi) ok = ok && agrees(*r.via_cmi, r.direct, rel, abs_tol);
  if (r.via_replace_one) ok = ok && agrees(*r.via_replace_one, r.direct, rel, abs_tol);
  return ok;
}

Lemma1Sides lemma1_condition(const LearningProblem& problem, double gamma, const ProbVec& q) {
  Enumeration e = enumerate(problem);
  GibbsPosterior post = gibbs_from_energy(problem.prior, e.emp, gamma);
  if (q.size() != problem.num_w()) throw AlphabetMismatch(q.size(), problem.num_w());
  ProbVec pw = channel_output(e.ps, post.rows);
  // g(w) = E_{P_S}[ln Q(w) - ln P(w|S)]
  std::vector<double> a(pw.size()), b(pw.size());
  for (std::size_t w = 0; w < pw.size(); ++w) {
    std::vector<double> t(e.ps.size(), 0.0);
    for (std::size_t s = 0; s < e.ps.size(); ++s)
      if (e.ps[s] > kZeroProb) t[s] = e.ps[s] * (q.log_at(w) - post.rows[s].log_at(w));
    double g = ordered_sum(t);
    a[w] = pw[w] * g;
    b[w] = q[w] * g;
  }
  return {ordered_sum(a), ordered_sum(b)};
}

bool PropositionCompare::holds(double tol) const {
  double scale = std::max({1.0, mutual + lautum});
  return mutual <= d_fwd + tol * scale && lautum >= d_rev - tol * scale &&
         std::fabs((mutual + lautum) - (d_fwd + d_rev)) <= tol * scale;
}

PropositionCompare proposition_compare(const LearningProblem& problem, double gamma) {
  PropositionCompare out;
  if (gamma == 0.0) return out;
  require_gamma(gamma);
  Enumeration e = enumerate(problem);
  GibbsPosterior post = gibbs_from_energy(problem.prior, e.emp, gamma);
  InfoReport info = channel_info(e.ps, post.rows);
  ProbVec q = population_gibbs(problem, gamma);
  std::vector<double> tf(e.ps.size(), 0.0), tr(e.ps.size(), 0.0);
  for (std::size_t s = 0; s < e.ps.size(); ++s) {
    if (e.ps[s] <= kZeroProb) continue;
    DirectedPair d = directed(post.rows[s], q);
    tf[s] = e.ps[s] * d.fwd;
    tr[s] = e.ps[s] * d.rev;
  }
  out.mutual = info.mutual;
  out.lautum = info.lautum;
  out.d_fwd = ordered_sum(tf);
  out.d_rev = ordered_sum(tr);
  return out;
}

bool RegularizedGenReport::consistent(double rel) const {
  double rhs = iskl_over_gamma - lambda * reg_gap;
  double scale = std::max({std::fabs(gen), std::fabs(iskl_over_gamma), std::fabs(lambda * reg_gap)});
  if (scale < 1e-9) return std::fabs(gen - rhs) <= 1e-12;
  return std::fabs(gen - rhs) <= rel * scale;
}

RegularizedGenReport regularized_gen(const LearningProblem& problem, double gamma, double lambda,
                                     const Eigen::MatrixXd& regularizer) {
  require_gamma(gamma);
  if (!(lambda >= 0.0)) throw ConfigInvalid("lambda", "must be >= 0");
  Enumeration e = enumerate(problem);
  if (regularizer.rows() != e.emp.rows() || regularizer.cols() != e.emp.cols())
    throw AlphabetMismatch(static_cast<std::size_t>(regularizer.size()), static_cast<std::size_t>(e.emp.size()));
  if ((regularizer.array() < 0.0).any()) throw ConfigInvalid("regularizer", "entries must be >= 0");
  Eigen::MatrixXd energy = e.emp + lambda * regularizer;
  GibbsPosterior post = gibbs_from_energy(problem.prior, energy, gamma);
  RegularizedGenReport r;
  r.lambda = lambda;
  r.gen = gen_under(e.ps, e.emp, post.rows);
  r.iskl_over_gamma = channel_info(e.ps, post.rows).symmetrized / gamma;
  r.reg_gap = delta_expectation(e.ps, post.rows, regularizer);
  return r;
}

RegularizedGenReport regularized_gen_l2(const LearningProblem& problem, double gamma, double lambda,
                                        const Eigen::MatrixXd& embed, const Eigen::MatrixXd& target) {
  Enumeration e = enumerate(problem);
  if (static_cast<std::size_t>(embed.rows()) != problem.num_w() || target.rows() != e.emp.cols() ||
      embed.cols() != target.cols())
    throw AlphabetMismatch(static_cast<std::size_t>(embed.cols()), static_cast<std::size_t>(target.cols()));
  Eigen::MatrixXd reg(e.emp.rows(), e.emp.cols());
  Eigen::MatrixXd inner = embed * target.transpose();
  for (Eigen::Index w = 0; w < reg.rows(); ++w)
    for (Eigen::Index s = 0; s < reg.cols(); ++s) reg(w, s) = (embed.row(w) - target.row(s)).squaredNorm();
  RegularizedGenReport r = regularized_gen(problem, gamma, lambda, reg);
  GibbsPosterior post = gibbs_from_energy(problem.prior, e.emp + lambda * reg, gamma);
  // tr Cov(W, T(S)) = -E_delta[<W, T(S)>]
  r.trace_cov = -delta_expectation(e.ps, post.rows, inner);
  return r;
}

std::vector<double> empirical_risk_curve(const LearningProblem& problem, const std::vector<double>& gammas) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] >= 0.0)) throw GammaNonPositive(gammas[i]);
    if (i > 0 && !(gammas[i] > gammas[i - 1])) throw ConfigInvalid("gammas", "must be strictly increasing");
  }
  Enumeration e = enumerate(problem);
  std::vector<double> out;
  for (double g : gammas) {
    GibbsPosterior post = gibbs_from_energy(problem.prior, e.emp, g);
    std::vector<double> t(e.ps.size(), 0.0);
    for (std::size_t s = 0; s < e.ps.size(); ++s) {
      double acc = 0.0;
      for (std::size_t w = 0; w < problem.num_w(); ++w)
        acc += post.rows[s][w] * e.emp(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(s));
      t[s] = e.ps[s] * acc;
    }
    out.push_back(ordered_sum(t));
  }
  return out;
}

ConcavityResult concavity_probe(const LearningProblem& tmpl,
                                const std::vector<std::pair<double, DataModel>>& components, double gamma) {
  if (components.empty()) throw ConfigInvalid("components", "need at least one component");
  std::vector<double> wv;
  for (const auto& c : components) wv.push_back(c.first);
  ProbVec weights(wv);
  std::size_t k = tmpl.num_z();
  std::vector<ProbVec> laws;
  for (const auto& c : components) laws.push_back(dataset_law(c.second, k, tmpl.n));
  std::vector<double> mix(laws[0].size(), 0.0);
  for (std::size_t c = 0; c < laws.size(); ++c)
    for (std::size_t s = 0; s < mix.size(); ++s) mix[s] += weights[c] * laws[c][s];
  LearningProblem mixed = tmpl;
  mixed.data = JointData{ProbVec::normalized(mix)};
  Enumeration e = enumerate(mixed);
  GibbsPosterior post = gibbs_from_energy(tmpl.prior, e.emp, gamma);
  ConcavityResult r;
  r.gen_mixture = gen_under(e.ps, e.emp, post.rows);
  double avg = 0.0;
  for (std::size_t c = 0; c < laws.size(); ++c) {
    double g = gen_under(laws[c], e.emp, post.rows);
    r.component_gen.push_back(g);
    avg += weights[c] * g;
  }
  r.avg_gen = avg;
  return r;
}

ChainRuleReport chain_rule_example(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.125)) throw EpsilonOutOfRange(epsilon);
  // P(w, z1, z2): (0,0) cells carry 1/8; otherwise w=1 carries 1/4 - eps, w=0 carries eps.
  auto cell = [&](int w, int a, int b) {
    if (a == 0 && b == 0) return 0.125;
    return w == 1 ? 0.25 - epsilon : epsilon;
  };
  std::vector<double> full(8), m1(4, 0.0), m2(4, 0.0);
  for (int w = 0; w < 2; ++w)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double p = cell(w, a, b);
        full[w * 4 + a * 2 + b] = p;
        m1[w * 2 + a] += p;
        m2[w * 2 + b] += p;
      }
  ChainRuleReport r;
  r.w_z1 = info_triple(JointTable(2, 2, m1));
  r.w_z2 = info_triple(JointTable(2, 2, m2));
  r.w_z1z2 = info_triple(JointTable(2, 4, full));
  r.individual_sum_exceeds_joint = r.w_z1.symmetrized + r.w_z2.symmetrized > r.w_z1z2.symmetrized;
  return r;
}

}  // namespace gibbs
