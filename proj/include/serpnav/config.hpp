#pragma once

#include <optional>
#include <string>
#include <vector>

#include "serpnav/world.hpp"

namespace serpnav {

/// Scenario file contents: an EpisodeConfig plus the scene reference, sweep
/// grids, and an optional pre-fitted reduction map.
struct ScenarioConfig {
  EpisodeConfig episode;
  std::string scene_path;          // resolved relative to the config file
  std::string reduction_path;      // optional pre-fitted map
  bool has_explicit_map{false};    // map values given inline

  std::vector<double> sweep_amplitudes{0.005, 0.01, 0.015, 0.02};
  std::vector<double> sweep_kappas{-2.0, -1.5, -1.0, -0.5, 0.0,
                                   0.5,  1.0,  1.5,  2.0};
  int sweep_settle_cycles{4};
  int sweep_average_cycles{8};
};

/// Built-in defaults (no scene reference).
ScenarioConfig defaultScenarioConfig();

/// Loads a "format: 1" scenario file; unknown keys and malformed values are
/// rejected with a line diagnostic.
ScenarioConfig loadScenarioConfig(const std::string& path);

/// The reduction map for a scenario: inline values if given, else the
/// referenced map file, else a fresh sweep + fit with the scenario's gait
/// parameters (`threads` caps the sweep parallelism).
ReductionMap resolveReductionMap(const ScenarioConfig& config, int threads = 1);

}  // namespace serpnav
