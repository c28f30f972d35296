#pragma once

#include <string>
#include <vector>

#include "desens/layout.hpp"
#include "desens/reconstruction.hpp"
#include "desens/simulator.hpp"

namespace desens {

/// Grid-campaign section of the config (set 1 = aligned lattice, set 2 =
/// same lattice tilted, set 3 = set 1 on a normal shim).
struct GridProtocolConfig {
  int points_per_axis = 7;
  double extent_mm = 15.0;
  double tilt_rad = 0.39269908169872414;  // 22.5 deg
  double shim_z_mm = 3.0;
  double relax_s = 20.0;
};

/// Sine-campaign section of the config.
struct SineProtocolConfig {
  char axis = 'y';
  double amplitude_mm = 2.0;
  std::vector<double> frequencies_hz{0.001, 0.01, 0.1, 1.0};
  int cycles = 10;
  int samples_per_cycle = 100;
};

/// Everything the CLI needs, loaded from one JSON document. See the README
/// for the schema; every knob has a flag override and flags win.
struct SensorConfig {
  SensorLayout layout;
  NoiseModel noise;
  GridProtocolConfig grid;
  SineProtocolConfig sine;
  RobotGeometry robot;
};

/// Parses a config JSON document. Unknown keys are rejected at the top
/// level; missing keys fall back to the defaults above. Malformed JSON or
/// invalid values throw ConfigError with the offending path.
SensorConfig parse_sensor_config(const std::string& json_text);
SensorConfig load_sensor_config(const std::string& path);

/// Serializes a config back to canonical JSON (stable key order, full
/// double precision) — used to generate the bundled example configs.
std::string dump_sensor_config(const SensorConfig& config);

}  // namespace desens
