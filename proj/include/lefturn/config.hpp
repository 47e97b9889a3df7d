#pragma once

// Scenario configuration and its JSON form. Every key is optional (defaults
// below); unknown keys and out-of-range values are rejected.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lefturn/common.hpp"
#include "lefturn/controllers.hpp"
#include "lefturn/geometry.hpp"
#include "lefturn/metrics.hpp"
#include "lefturn/world.hpp"

namespace lefturn {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TraceMode { All, First, None };

struct ScenarioConfig {
  std::vector<double> volumes{600.0, 800.0, 1000.0};
  std::vector<ControllerKind> controllers{ControllerKind::BaseAv1, ControllerKind::BaseAv2,
                                          ControllerKind::SituationAware};
  int runs_per_cell = 30;
  std::uint64_t base_seed = 1;
  double dt = 0.1;
  double follower_start_offset = 8.0;
  double warmup = 40.0;
  double max_duration = 300.0;
  double subject_entry_speed = 12.5;
  double vehicle_length = 4.6;
  bool include_follower = true;
  TraceMode traces = TraceMode::All;

  IntersectionLayout layout;
  ConflictParams conflict;
  OpposingTrafficParams opposing;  // volume_vphpln is set per cell
  IdmParams idm;
  AggressiveFollowerParams follower;
  SensorParams sensors;
  ControllerParams controller;
  BrakeDetectorParams detector;

  // Non-fatal remarks collected while parsing (reordered bounds, overrides).
  // Not serialised.
  std::vector<std::string> warnings;

  // Throws ConfigError.
  void validate() const;
};

// Throws ConfigError on malformed JSON, unknown keys, wrong types or invalid values.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
std::string config_to_json(const ScenarioConfig& c, int indent = 2);

// World and geometry settings for one cell/seed.
WorldParams world_params(const ScenarioConfig& c, double volume, std::uint64_t seed);
SceneGeometry scene_of(const ScenarioConfig& c);

}  // namespace lefturn
