#pragma once

#include <string>
#include <vector>

#include "gibbs/asymptotics.hpp"
#include "gibbs/engine.hpp"
#include "gibbs/gaussian.hpp"
#include "json.hpp"

namespace gibbs {

using json = nlohmann::json;

// Field accessors that raise ConfigInvalid with the JSON path.
double get_number(const json& j, const std::string& key, const std::string& path);
double get_number_or(const json& j, const std::string& key, const std::string& path, double fallback);
long get_int_or(const json& j, const std::string& key, const std::string& path, long fallback);
std::vector<double> get_vector(const json& j, const std::string& key, const std::string& path);

LearningProblem problem_from_json(const json& j, const std::string& path = "$");
json problem_to_json(const LearningProblem& p);

GaussianMeanConfig gaussian_config_from_json(const json& j, const std::string& path = "$");
json gaussian_config_to_json(const GaussianMeanConfig& c);

std::vector<WellSample> wells_from_json(const json& j, const std::string& path = "$");

json prob_to_json(const ProbVec& p, const std::vector<std::string>& alphabet = {});
json joint_to_json(const JointTable& t);
json info_to_json(const InfoReport& r);
json gen_report_to_json(const GenReport& r);

}  // namespace gibbs
