#include "run_config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "commgrow/io.hpp"

namespace commgrow::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {
    "gamma", "n", "mu", "r1", "rn", "r1_path", "rn_path", "preference_path", "preference",
    "target_vdd_path", "seed_size", "steps", "rng_seed", "tol", "k_max", "output_dir",
    "replications", "check_interval", "calibration_g", "calibration_max_degree",
    "forward_tv_tol", "simulation_tv_tol"};

// {"1": 0.5, "2": 0.5} or [[1, 0.5], [2, 0.5]].
DegreeDistribution inline_distribution(const json& j, const char* key) {
  std::vector<std::pair<int, double>> pairs;
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) pairs.emplace_back(std::stoi(k), v.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) pairs.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
  } else {
    throw std::invalid_argument(std::string("config key '") + key + "' must be an object or array");
  }
  return DegreeDistribution::from_pairs(std::move(pairs));
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKeys.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");

  RunConfig c;
  c.base_dir = std::filesystem::path(path).parent_path();
  try {
    read(j, "gamma", c.gamma);
    read(j, "n", c.n);
    read(j, "mu", c.mu);
    if (j.contains("r1")) c.r1 = inline_distribution(j.at("r1"), "r1");
    if (j.contains("rn")) c.rn = inline_distribution(j.at("rn"), "rn");
    read(j, "r1_path", c.r1_path);
    read(j, "rn_path", c.rn_path);
    read(j, "preference_path", c.preference_path);
    if (j.contains("preference")) {
      const auto& pj = j.at("preference");
      AffineSpec s;
      read(pj, "slope", s.slope);
      read(pj, "intercept", s.intercept);
      read(pj, "g", s.g);
      read(pj, "max_degree", s.max_degree);
      c.preference = s;
    }
    read(j, "target_vdd_path", c.target_vdd_path);
    read(j, "seed_size", c.seed_size);
    read(j, "steps", c.steps);
    read(j, "rng_seed", c.rng_seed);
    read(j, "tol", c.tol);
    read(j, "k_max", c.k_max);
    read(j, "output_dir", c.output_dir);
    read(j, "replications", c.replications);
    read(j, "check_interval", c.check_interval);
    read(j, "calibration_g", c.calibration_g);
    read(j, "calibration_max_degree", c.calibration_max_degree);
    read(j, "forward_tv_tol", c.forward_tv_tol);
    read(j, "simulation_tv_tol", c.simulation_tv_tol);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path + ": " + e.what());
  }
  if (c.r1 && c.r1_path) throw std::invalid_argument("give r1 or r1_path, not both");
  if (c.rn && c.rn_path) throw std::invalid_argument("give rn or rn_path, not both");
  if (c.preference && c.preference_path)
    throw std::invalid_argument("give preference or preference_path, not both");
  return c;
}

std::filesystem::path resolve(const RunConfig& c, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : c.base_dir / p;
}

ModelParams model_params(const RunConfig& c) {
  ModelParams p;
  p.gamma = c.gamma;
  p.n = c.n;
  p.mu = c.mu;
  p.r1 = c.r1 ? *c.r1
               : (c.r1_path ? read_distribution_file(resolve(c, *c.r1_path).string())
                            : DegreeDistribution::point_mass(0));
  p.rn = c.rn ? *c.rn
              : (c.rn_path ? read_distribution_file(resolve(c, *c.rn_path).string())
                           : DegreeDistribution::point_mass(0));
  validate_params(p);
  return p;
}

bool has_preference(const RunConfig& c) { return c.preference || c.preference_path; }

PreferenceFunction preference_function(const RunConfig& c) {
  if (c.preference)
    return PreferenceFunction::affine(c.preference->slope, c.preference->intercept, c.preference->g,
                                      c.preference->max_degree);
  if (c.preference_path) return read_preference_file(resolve(c, *c.preference_path).string());
  throw std::invalid_argument("config has no preference function");
}

std::vector<std::string> echo_lines(const RunConfig& c, const ModelParams& p) {
  auto lines = describe_params(p);
  lines.push_back("seed_size=" + std::to_string(c.seed_size));
  lines.push_back("steps=" + std::to_string(c.steps));
  lines.push_back("rng_seed=" + std::to_string(c.rng_seed));
  lines.push_back("tol=" + format_real(c.tol));
  lines.push_back("k_max=" + (c.k_max ? std::to_string(*c.k_max) : std::string("auto")));
  if (c.preference) {
    const auto& s = *c.preference;
    lines.push_back("preference=affine slope=" + format_real(s.slope) +
                    " intercept=" + format_real(s.intercept) + " g=" + std::to_string(s.g) +
                    " M=" + (s.max_degree ? std::to_string(*s.max_degree) : std::string("inf")));
  } else if (c.preference_path) {
    lines.push_back("preference_path=" + *c.preference_path);
  }
  if (c.target_vdd_path) lines.push_back("target_vdd_path=" + *c.target_vdd_path);
  return lines;
}

}  // namespace commgrow::cli
