#include "gibbs/problem_io.hpp"

#include <cmath>

namespace gibbs {

namespace {

std::string join(const std::string& path, const std::string& key) { return path + "." + key; }

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigInvalid(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigInvalid(join(path, key), "missing");
  return *it;
}

std::vector<double> as_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigInvalid(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigInvalid(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<std::string> labels(const json& j, const std::string& key, const std::string& path, std::size_t k,
                                const std::string& prefix) {
  std::vector<std::string> out;
  if (j.contains(key)) {
    const json& a = j.at(key);
    if (!a.is_array()) throw ConfigInvalid(join(path, key), "expected an array");
    for (const auto& v : a) out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    if (out.size() != k) throw ConfigInvalid(join(path, key), "length does not match the loss table");
  } else {
    for (std::size_t i = 0; i < k; ++i) out.push_back(prefix + std::to_string(i));
  }
  return out;
}

ProbVec as_prob(const std::vector<double>& w, const std::string& path) {
  try {
    return ProbVec(w);
  } catch (const InvalidDistribution& e) {
    throw ConfigInvalid(path, e.what());
  }
}

Eigen::MatrixXd as_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigInvalid(path, "expected a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) rows.push_back(as_vector(v[i], path + "[" + std::to_string(i) + "]"));
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ConfigInvalid(path, "ragged rows");
    for (std::size_t c = 0; c < rows[i].size(); ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  }
  return m;
}

Eigen::VectorXd as_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double get_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ConfigInvalid(join(path, key), "expected a number");
  return v.get<double>();
}

double get_number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_number(j, key, path);
}

long get_int_or(const json& j, const std::string& key, const std::string& path, long fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigInvalid(join(path, key), "expected an integer");
  return v.get<long>();
}

std::vector<double> get_vector(const json& j, const std::string& key, const std::string& path) {
  return as_vector(require(j, key, path), join(path, key));
}

LearningProblem problem_from_json(const json& j, const std::string& path) {
  LearningProblem p;
  p.loss = as_matrix(require(j, "loss", path), join(path, "loss"));
  const json& nv = require(j, "n", path);
  if (!nv.is_number_integer() || nv.get<long>() < 1) throw ConfigInvalid(join(path, "n"), "expected a positive integer");
  p.n = static_cast<int>(nv.get<long>());
  p.hypotheses = labels(j, "hypotheses", path, static_cast<std::size_t>(p.loss.rows()), "w");
  p.samples = labels(j, "samples", path, static_cast<std::size_t>(p.loss.cols()), "z");
  p.prior = as_prob(get_vector(j, "prior", path), join(path, "prior"));
  const json& data = require(j, "data", path);
  std::string dpath = join(path, "data");
  if (data.is_object() && data.contains("iid")) {
    p.data = IidData{as_prob(get_vector(data, "iid", dpath), join(dpath, "iid"))};
  } else if (data.is_object() && data.contains("joint")) {
    const json& jt = data.at("joint");
    std::string jpath = join(dpath, "joint");
    std::size_t k = static_cast<std::size_t>(p.loss.cols());
    double count = std::pow(static_cast<double>(k), p.n);
    if (count > kDefaultEnumCap) throw EnumerationTooLarge(count, kDefaultEnumCap);
    if (jt.is_array()) {
      p.data = JointData{as_prob(as_vector(jt, jpath), jpath)};
    } else if (jt.is_object() && jt.contains("tuples")) {
      // sparse listing: tuples of sample indices with weights
      const json& tuples = jt.at("tuples");
      std::vector<double> w = get_vector(jt, "weights", jpath);
      if (!tuples.is_array() || tuples.size() != w.size()) throw ConfigInvalid(join(jpath, "tuples"), "must pair with weights");
      std::vector<double> dense(static_cast<std::size_t>(count), 0.0);
      for (std::size_t t = 0; t < tuples.size(); ++t) {
        std::string tp = join(jpath, "tuples") + "[" + std::to_string(t) + "]";
        std::vector<double> tv = as_vector(tuples[t], tp);
        if (tv.size() != static_cast<std::size_t>(p.n)) throw ConfigInvalid(tp, "tuple length must equal n");
        std::vector<int> z;
        for (double v : tv) {
          if (v < 0 || v >= static_cast<double>(k) || v != std::floor(v)) throw ConfigInvalid(tp, "sample index out of range");
          z.push_back(static_cast<int>(v));
        }
        dense[dataset_index(z, k)] += w[t];
      }
      p.data = JointData{as_prob(dense, jpath)};
    } else if (jt.is_object()) {
      p.data = JointData{as_prob(get_vector(jt, "weights", jpath), join(jpath, "weights"))};
    } else {
      throw ConfigInvalid(jpath, "expected an array or object");
    }
  } else {
    throw ConfigInvalid(dpath, "expected {\"iid\": [...]} or {\"joint\": ...}");
  }
  try {
    p.validate();
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const Error& e) {
    throw ConfigInvalid(path, e.what());
  }
  return p;
}

json problem_to_json(const LearningProblem& p) {
  json j;
  j["samples"] = p.samples;
  j["hypotheses"] = p.hypotheses;
  json loss = json::array();
  for (Eigen::Index r = 0; r < p.loss.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < p.loss.cols(); ++c) row.push_back(p.loss(r, c));
    loss.push_back(row);
  }
  j["loss"] = loss;
  j["prior"] = p.prior.weights();
  if (const auto* iid = std::get_if<IidData>(&p.data))
    j["data"] = {{"iid", iid->pz.weights()}};
  else
    j["data"] = {{"joint", std::get<JointData>(p.data).ps.weights()}};
  j["n"] = p.n;
  return j;
}

GaussianMeanConfig gaussian_config_from_json(const json& j, const std::string& path) {
  GaussianMeanConfig c;
  c.d = static_cast<int>(get_int_or(j, "d", path, 1));
  c.n = static_cast<int>(get_int_or(j, "n", path, 10));
  c.sigma0_sq = get_number_or(j, "sigma0_sq", path, 1.0);
  c.sigmaZ_sq = get_number_or(j, "sigmaZ_sq", path, 1.0);
  c.sigma_sq = get_number_or(j, "sigma_sq", path, 1.0);
  if (j.contains("gamma")) {
    double g = get_number(j, "gamma", path);
    if (!(g > 0.0)) throw ConfigInvalid(join(path, "gamma"), "must be > 0");
    c.sigma_sq = c.n / (2.0 * g);
  }
  auto vec_or_zero = [&](const char* key) {
    if (!j.contains(key)) return Eigen::VectorXd(Eigen::VectorXd::Zero(c.d));
    std::vector<double> v = get_vector(j, key, path);
    if (v.size() != static_cast<std::size_t>(c.d)) throw ConfigInvalid(join(path, key), "length must equal d");
    return as_eigen(v);
  };
  c.mu = vec_or_zero("mu");
  c.mu0 = vec_or_zero("mu0");
  try {
    c.validate();
  } catch (const ConfigInvalid& e) {
    throw ConfigInvalid(path, e.what());
  }
  return c;
}

json gaussian_config_to_json(const GaussianMeanConfig& c) {
  return {{"d", c.d},
          {"n", c.n},
          {"mu", std::vector<double>(c.mu.data(), c.mu.data() + c.mu.size())},
          {"mu0", std::vector<double>(c.mu0.data(), c.mu0.data() + c.mu0.size())},
          {"sigma0_sq", c.sigma0_sq},
          {"sigmaZ_sq", c.sigmaZ_sq},
          {"sigma_sq", c.sigma_sq},
          {"gamma", c.gamma()}};
}

std::vector<WellSample> wells_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigInvalid(path, "expected an array of well samples");
  std::vector<WellSample> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    WellSample s;
    s.w_star = as_eigen(get_vector(j[i], "w_star", p));
    s.hessian = as_matrix(require(j[i], "hessian", p), join(p, "hessian"));
    s.weight = get_number_or(j[i], "weight", p, 1.0);
    if (s.hessian.rows() != s.w_star.size() || s.hessian.cols() != s.w_star.size())
      throw ConfigInvalid(join(p, "hessian"), "must be square with the dimension of w_star");
    out.push_back(std::move(s));
  }
  return out;
}

json prob_to_json(const ProbVec& p, const std::vector<std::string>& alphabet) {
  json j;
  if (alphabet.empty()) {
    json a = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) a.push_back(i);
    j["alphabet"] = a;
  } else {
    j["alphabet"] = alphabet;
  }
  j["weights"] = p.weights();
  return j;
}

json joint_to_json(const JointTable& t) {
  json a = json::array();
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) a.push_back(json::array({r, c}));
  std::vector<double> w;
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) w.push_back(t(r, c));
  return {{"alphabet", a}, {"weights", w}};
}

json info_to_json(const InfoReport& r) {
  return {{"mutual", r.mutual}, {"lautum", r.lautum}, {"symmetrized", r.symmetrized}};
}

json gen_report_to_json(const GenReport& r) {
  json j = {{"direct", r.direct}, {"via_iskl", r.via_iskl}, {"via_skl_div", r.via_skl_div}};
  j["via_cmi"] = r.via_cmi ? json(*r.via_cmi) : json(nullptr);
  j["via_replace_one"] = r.via_replace_one ? json(*r.via_replace_one) : json(nullptr);
  j["info"] = info_to_json(r.info);
  return j;
}

}  // namespace gibbs
