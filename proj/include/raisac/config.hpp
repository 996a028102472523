#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "raisac/geometry.hpp"

namespace raisac {

/// Scenario description read from a flat `key = value` file. Units are part
/// of the key names; unknown keys are rejected.
struct ScenarioConfig {
  SystemParams params;

  // Sensing-threshold sweep, uniform in dB.
  double gamma_th_db_min = 80.0;
  double gamma_th_db_max = 105.89;
  int gamma_th_db_points = 60;

  std::vector<double> speeds_mps{3.0, 10.0, 30.0};
  int hfh_grid_n = 201;
  int pos_only_points = 2001;
  int ts_curve_points = 4001;

  bool scheme_midpoint = true;
  bool scheme_pos_only = true;
  bool scheme_midpoint_ra_opt = true;
  bool scheme_ts_bound = true;

  std::string output_dir = "out";
  std::uint64_t seed = 20240917;
  int threads = 1;

  // Verification suite. Claim families: lemma1, theorem1, theorem2, prop1,
  // integrals, theorem3; "all" selects every family.
  std::vector<std::string> verify_claims{"all"};
  int verify_lemma1_instances = 50;
  int verify_lemma1_grid_n = 200;
  int verify_theorem1_instances = 200;
  int verify_theorem1_grid_n = 10000;
  int verify_theorem2_thresholds = 20;
  int verify_theorem2_grid_n = 400;
  int verify_theorem3_thresholds = 10;
  int verify_theorem3_steps = 100;
  int verify_theorem3_restarts = 20;
  std::vector<double> verify_theorem3_speeds_mps{3.0, 10.0, 30.0};
  // Multiplies the closed-form static rate inside the verification suite only.
  double mutation_rate_scale = 1.0;
};

/// Throws Error(ConfigError) on malformed lines, unknown keys or invalid values.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& config);

double db_to_linear(double db);
double linear_to_db(double linear);

/// Threshold sweep in linear units. Bounds above the static feasibility limit
/// are clipped to it, with a message appended to `warnings`.
std::vector<double> threshold_grid(const ScenarioConfig& config,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace raisac
