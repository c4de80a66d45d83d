#include "serpnav/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "serpnav/io.hpp"

namespace serpnav {

namespace {

std::string resolveRelative(const std::string& base_file, const std::string& ref) {
  const std::filesystem::path p(ref);
  if (p.is_absolute()) return ref;
  return (std::filesystem::path(base_file).parent_path() / p).string();
}

}  // namespace

ScenarioConfig defaultScenarioConfig() {
  ScenarioConfig config;
  config.episode.odometry_noise_enabled = false;
  return config;
}

ScenarioConfig loadScenarioConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);

  ScenarioConfig config = defaultScenarioConfig();
  EpisodeConfig& ep = config.episode;

  bool format_seen = false;
  double pitch_deg = ep.camera.mount_pitch * 180.0 / M_PI;
  ReductionMap inline_map;
  int inline_map_fields = 0;

  std::map<std::string, std::function<void(std::istringstream&)>> handlers;
  const auto number = [](std::istringstream& s) {
    double v;
    if (!(s >> v)) throw std::runtime_error("expected a number");
    return v;
  };
  const auto integer = [&](std::istringstream& s) {
    const double v = number(s);
    if (v != std::floor(v)) throw std::runtime_error("expected an integer");
    return static_cast<int>(v);
  };
  const auto numbers = [&](std::istringstream& s) {
    std::vector<double> out;
    double v;
    while (s >> v) out.push_back(v);
    if (out.empty()) throw std::runtime_error("expected numbers");
    return out;
  };
  const auto boolean = [](std::istringstream& s) {
    std::string v;
    s >> v;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::runtime_error("expected true/false");
  };

  handlers["scene"] = [&](std::istringstream& s) {
    std::string ref;
    s >> ref;
    config.scene_path = resolveRelative(path, ref);
  };
  handlers["reduction_file"] = [&](std::istringstream& s) {
    std::string ref;
    s >> ref;
    config.reduction_path = resolveRelative(path, ref);
  };
  handlers["mode"] = [&](std::istringstream& s) {
    std::string v;
    s >> v;
    if (v == "reduced") ep.mode = SimMode::kReduced;
    else if (v == "high_fidelity" || v == "high-fidelity") ep.mode = SimMode::kHighFidelity;
    else throw std::runtime_error("mode must be reduced or high_fidelity");
  };
  handlers["seed"] = [&](std::istringstream& s) {
    unsigned long long v;
    if (!(s >> v)) throw std::runtime_error("expected a seed");
    ep.seed = v;
  };
  handlers["cycle_budget"] = [&](std::istringstream& s) { ep.cycle_budget = integer(s); };

  handlers["gait.amplitude"] = [&](std::istringstream& s) { ep.gait.amplitude = number(s); };
  handlers["gait.wavelength"] = [&](std::istringstream& s) { ep.gait.wavelength = number(s); };
  handlers["gait.frequency"] = [&](std::istringstream& s) { ep.gait.frequency = number(s); };
  handlers["gait.body_length"] = [&](std::istringstream& s) { ep.gait.body_length = number(s); };
  handlers["gait.link_count"] = [&](std::istringstream& s) { ep.gait.link_count = integer(s); };
  handlers["gait.link_mass"] = [&](std::istringstream& s) { ep.sim.link_mass = number(s); };
  handlers["gait.pulse_width"] = [&](std::istringstream& s) { ep.sim.pulse_width = number(s); };
  handlers["gait.contact_threshold_factor"] = [&](std::istringstream& s) {
    ep.sim.contact_threshold_factor = number(s);
  };
  handlers["gait.contact_damping"] = [&](std::istringstream& s) {
    ep.sim.contact_damping = number(s);
  };
  handlers["gait.samples_per_link"] = [&](std::istringstream& s) {
    ep.sim.samples_per_link = integer(s);
  };
  handlers["gait.dt"] = [&](std::istringstream& s) { ep.sim.dt = number(s); };

  handlers["friction.mu_f"] = [&](std::istringstream& s) { ep.friction.mu_f = number(s); };
  handlers["friction.mu_b"] = [&](std::istringstream& s) { ep.friction.mu_b = number(s); };
  handlers["friction.mu_t"] = [&](std::istringstream& s) { ep.friction.mu_t = number(s); };

  handlers["camera.fx"] = [&](std::istringstream& s) { ep.camera.fx = number(s); };
  handlers["camera.fy"] = [&](std::istringstream& s) { ep.camera.fy = number(s); };
  handlers["camera.cx"] = [&](std::istringstream& s) { ep.camera.cx = number(s); };
  handlers["camera.cy"] = [&](std::istringstream& s) { ep.camera.cy = number(s); };
  handlers["camera.mount_height"] = [&](std::istringstream& s) {
    ep.camera.mount_height = number(s);
  };
  handlers["camera.mount_pitch_deg"] = [&](std::istringstream& s) { pitch_deg = number(s); };

  handlers["perception.flip_probability"] = [&](std::istringstream& s) {
    ep.flip_probability = number(s);
  };

  handlers["planner.candidates"] = [&](std::istringstream& s) {
    ep.candidate_count = integer(s);
  };
  handlers["planner.kappa_max"] = [&](std::istringstream& s) { ep.kappa_max = number(s); };
  handlers["planner.horizon"] = [&](std::istringstream& s) { ep.horizon = number(s); };
  handlers["planner.spacing"] = [&](std::istringstream& s) { ep.spacing = number(s); };
  handlers["planner.min_progress"] = [&](std::istringstream& s) {
    ep.min_progress = number(s);
  };
  handlers["planner.footprint_width"] = [&](std::istringstream& s) {
    ep.footprint_width = number(s);
  };
  handlers["planner.goal_heading_clamp"] = [&](std::istringstream& s) {
    ep.goal_heading_clamp = number(s);
  };
  handlers["perception.erode_rows"] = [&](std::istringstream& s) {
    ep.erode_rows = integer(s);
  };
  handlers["perception.erode_cols"] = [&](std::istringstream& s) {
    ep.erode_cols = integer(s);
  };

  handlers["controller.waypoint_radius"] = [&](std::istringstream& s) {
    ep.tracking.waypoint_radius = number(s);
  };
  handlers["controller.replan_cycles"] = [&](std::istringstream& s) {
    ep.tracking.replan_cycles = integer(s);
  };
  handlers["controller.k_heading"] = [&](std::istringstream& s) {
    ep.tracking.k_heading = number(s);
  };
  handlers["controller.k_cross"] = [&](std::istringstream& s) {
    ep.tracking.k_cross = number(s);
  };

  handlers["localization.noise_enabled"] = [&](std::istringstream& s) {
    ep.odometry_noise_enabled = boolean(s);
  };
  handlers["localization.translation_sigma_frac"] = [&](std::istringstream& s) {
    ep.odometry_noise.translation_sigma_frac = number(s);
  };
  handlers["localization.rotation_sigma"] = [&](std::istringstream& s) {
    ep.odometry_noise.rotation_sigma = number(s);
  };
  handlers["localization.drift_median"] = [&](std::istringstream& s) {
    ep.odometry_noise.drift_median = number(s);
  };
  handlers["localization.drift_sigma"] = [&](std::istringstream& s) {
    ep.odometry_noise.drift_sigma = number(s);
  };
  handlers["localization.translation_gate"] = [&](std::istringstream& s) {
    ep.gating.translation_gate = number(s);
  };
  handlers["localization.rotation_gate"] = [&](std::istringstream& s) {
    ep.gating.rotation_gate = number(s);
  };
  handlers["localization.fusion_weight"] = [&](std::istringstream& s) {
    ep.gating.fusion_weight = number(s);
  };
  handlers["localization.gating_enabled"] = [&](std::istringstream& s) {
    ep.gating.gating_enabled = boolean(s);
  };

  handlers["reduction.v_forward"] = [&](std::istringstream& s) {
    inline_map.v_forward = number(s);
    ++inline_map_fields;
  };
  handlers["reduction.omega_slope"] = [&](std::istringstream& s) {
    inline_map.omega_slope = number(s);
    ++inline_map_fields;
  };
  handlers["reduction.omega_intercept"] = [&](std::istringstream& s) {
    inline_map.omega_intercept = number(s);
    ++inline_map_fields;
  };
  handlers["reduction.fit_r_squared"] = [&](std::istringstream& s) {
    inline_map.fit_r_squared = number(s);
    ++inline_map_fields;
  };

  handlers["sweep.A"] = [&](std::istringstream& s) { config.sweep_amplitudes = numbers(s); };
  handlers["sweep.kappa"] = [&](std::istringstream& s) { config.sweep_kappas = numbers(s); };
  handlers["sweep.settle_cycles"] = [&](std::istringstream& s) {
    config.sweep_settle_cycles = integer(s);
  };
  handlers["sweep.average_cycles"] = [&](std::istringstream& s) {
    config.sweep_average_cycles = integer(s);
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'key: value'");
    }
    std::string key = line.substr(0, colon);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::istringstream value(line.substr(colon + 1));

    if (key == "format") {
      std::string v;
      value >> v;
      if (v != "1") {
        throw std::runtime_error(path + ": unsupported config format (expected 1)");
      }
      format_seen = true;
      continue;
    }
    const auto handler = handlers.find(key);
    if (handler == handlers.end()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
    }
    try {
      handler->second(value);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::string trailing;
    if (value >> trailing) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": trailing tokens after value");
    }
  }
  if (!format_seen) {
    throw std::runtime_error(path + ": missing 'format: 1'");
  }

  ep.camera.mount_pitch = pitch_deg * M_PI / 180.0;
  ep.gait.validate();
  ep.friction.validate();
  ep.camera.validate();
  if (inline_map_fields > 0) {
    if (inline_map_fields < 3 || inline_map.omega_slope == 0.0 ||
        !(inline_map.v_forward > 0.0)) {
      throw std::runtime_error(path + ": incomplete inline reduction map");
    }
    ep.map = inline_map;
    config.has_explicit_map = true;
  }
  return config;
}

ReductionMap resolveReductionMap(const ScenarioConfig& config, int threads) {
  if (config.has_explicit_map) return config.episode.map;
  if (!config.reduction_path.empty()) return loadReductionMap(config.reduction_path);
  const SweepResult sweep = sweepParameters(
      config.sweep_amplitudes, config.sweep_kappas, config.episode.gait,
      config.episode.friction, config.sweep_settle_cycles,
      config.sweep_average_cycles, config.episode.sim, threads);
  return fitReduction(sweep);
}

}  // namespace serpnav
