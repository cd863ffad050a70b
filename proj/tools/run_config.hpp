#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "commgrow/model.hpp"
#include "commgrow/preference.hpp"

namespace commgrow::cli {

// Preference given inline as slope·k + intercept on [g, max_degree].
struct AffineSpec {
  double slope = 1.0;
  double intercept = 0.0;
  int g = 1;
  std::optional<int> max_degree;
};

// Everything a run needs. Loaded from a JSON document; command-line flags
// are applied on top by the caller. Relative paths resolve against the
// config file's directory.
struct RunConfig {
  double gamma = 0.0;
  int n = 2;
  int mu = 0;
  std::optional<DegreeDistribution> r1;
  std::optional<DegreeDistribution> rn;
  std::optional<std::string> r1_path;
  std::optional<std::string> rn_path;

  std::optional<std::string> preference_path;
  std::optional<AffineSpec> preference;
  std::optional<std::string> target_vdd_path;

  int seed_size = 4;
  std::uint64_t steps = 0;
  std::uint64_t rng_seed = 1;
  double tol = 1e-12;
  std::optional<int> k_max;
  std::string output_dir = "out";
  int replications = 1;
  std::uint64_t check_interval = 0;

  std::optional<int> calibration_g;
  std::optional<int> calibration_max_degree;
  // Roundtrip pass thresholds.
  double forward_tv_tol = 1e-8;
  double simulation_tv_tol = 0.03;

  std::filesystem::path base_dir = ".";
};

// Throws std::invalid_argument on unknown keys, wrong types or unreadable files.
RunConfig load_config(const std::string& path);

std::filesystem::path resolve(const RunConfig& c, const std::string& path);

// Builds and validates the model parameters; r1 and rn default to point
// masses at 0 when absent.
ModelParams model_params(const RunConfig& c);

// The configured preference function; std::invalid_argument if none is given.
PreferenceFunction preference_function(const RunConfig& c);
bool has_preference(const RunConfig& c);

// Header echo lines: parameters, seed, steps and preference source.
std::vector<std::string> echo_lines(const RunConfig& c, const ModelParams& p);

}  // namespace commgrow::cli
