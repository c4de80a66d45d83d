// serpnav command-line front end: parameter sweeps, navigation episodes, and
// single-frame planning debug output.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "serpnav/config.hpp"
#include "serpnav/io.hpp"
#include "serpnav/perception.hpp"
#include "serpnav/svg.hpp"

namespace {

namespace fs = std::filesystem;
using namespace serpnav;

int threadLimit() {
  const char* env = std::getenv("SERPNAV_THREADS");
  if (env == nullptr) return 2;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

ScenarioConfig loadConfigOrDefault(const std::string& config_path) {
  if (config_path.empty()) return defaultScenarioConfig();
  return loadScenarioConfig(config_path);
}

void applyOverrides(ScenarioConfig& config, const std::optional<uint64_t>& seed,
                    const std::string& mode) {
  if (seed) config.episode.seed = *seed;
  if (mode == "reduced") {
    config.episode.mode = SimMode::kReduced;
  } else if (mode == "high-fidelity" || mode == "high_fidelity") {
    config.episode.mode = SimMode::kHighFidelity;
  } else if (!mode.empty()) {
    throw std::runtime_error("--mode must be reduced or high-fidelity");
  }
}

Scene sceneFor(const ScenarioConfig& config) {
  if (config.scene_path.empty()) {
    throw std::runtime_error("config does not reference a scene file");
  }
  return loadScene(config.scene_path);
}

int runSweep(const ScenarioConfig& config, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const SweepResult sweep = sweepParameters(
      config.sweep_amplitudes, config.sweep_kappas, config.episode.gait,
      config.episode.friction, config.sweep_settle_cycles,
      config.sweep_average_cycles, config.episode.sim, threadLimit());
  const ReductionMap map = fitReduction(sweep);

  std::ofstream csv(fs::path(out_dir) / "sweep.csv");
  if (!csv) throw std::runtime_error("cannot write sweep.csv");
  writeSweepCsv(sweep, csv);
  writeReductionMap(map, (fs::path(out_dir) / "reduction.txt").string());

  char line[192];
  std::snprintf(line, sizeof(line),
                "fit_r_squared: %.9g\nv_forward: %.9g\nomega_slope: %.9g\n",
                map.fit_r_squared, map.v_forward, map.omega_slope);
  std::cout << line;
  return 0;
}

int runEpisodeCommand(ScenarioConfig& config, const std::string& out_dir,
                      bool dump_frames) {
  fs::create_directories(out_dir);
  const Scene scene = sceneFor(config);
  config.episode.map = resolveReductionMap(config, threadLimit());
  if (dump_frames) config.episode.frame_dump_dir = out_dir;

  const EpisodeLog log = runEpisode(scene, config.episode);

  std::ofstream csv(fs::path(out_dir) / "episode.csv");
  if (!csv) throw std::runtime_error("cannot write episode.csv");
  writeEpisodeCsv(log, csv);
  writeTrajectorySvg(scene, log, (fs::path(out_dir) / "trajectory.svg").string());
  writeCurvatureSvg(log, config.episode.map, config.episode.kappa_max,
                    (fs::path(out_dir) / "curvature.svg").string());

  switch (log.termination) {
    case TerminationCause::kGoalReached:
      std::cout << "goal reached after " << log.records.size() << " cycles\n";
      return 0;
    case TerminationCause::kCollision:
      std::cout << "collision at cycle " << log.records.back().cycle << "\n";
      return 2;
    case TerminationCause::kBudgetExhausted:
      std::cout << "cycle budget exhausted\n";
      return 3;
  }
  return 3;
}

void drawFootprint(RgbImage& canvas, const Trajectory& traj,
                   const TraversabilityImage& image, const CameraModel& cam,
                   double width, int limit, uint8_t r, uint8_t g, uint8_t b) {
  for (int i = 0; i < static_cast<int>(traj.poses.size()); ++i) {
    if (limit >= 0 && i > limit) break;
    const FootprintProjection proj =
        projectFootprint(traj.poses[i], image.camera_pose, cam, width);
    if (proj.behind) continue;
    const double box_x = 8.0 * cam.width, box_y = 8.0 * cam.height;
    if (std::abs(proj.a.x()) > box_x || std::abs(proj.b.x()) > box_x ||
        std::abs(proj.a.y()) > box_y || std::abs(proj.b.y()) > box_y) {
      continue;
    }
    const Eigen::Vector2i pa(static_cast<int>(std::floor(proj.a.x() + 0.5)),
                             static_cast<int>(std::floor(proj.a.y() + 0.5)));
    const Eigen::Vector2i pb(static_cast<int>(std::floor(proj.b.x() + 0.5)),
                             static_cast<int>(std::floor(proj.b.y() + 0.5)));
    for (const Eigen::Vector2i& px : discreteLine(pa, pb)) {
      canvas.set(px.y(), px.x(), r, g, b);
    }
  }
}

int runPlanOnce(ScenarioConfig& config, const std::string& out_dir,
                const std::vector<double>& pose_values) {
  fs::create_directories(out_dir);
  const Scene scene = sceneFor(config);
  config.episode.map = resolveReductionMap(config, threadLimit());
  const EpisodeConfig& ep = config.episode;

  Pose2d pose = scene.start;
  if (!pose_values.empty()) {
    if (pose_values.size() != 3) {
      throw std::runtime_error("--pose needs exactly x y theta");
    }
    pose = {pose_values[0], pose_values[1], normalizeAngle(pose_values[2])};
  }

  const TraversabilityImage view = renderBinaryView(scene, pose, ep.camera);
  const BlockGrid blocks = classifyBlocks(view, ep.flip_probability, ep.seed);
  writePgm(view.pixels, (fs::path(out_dir) / "frame_binary.pgm").string());

  // Block grid upscaled to full resolution for side-by-side viewing.
  BinaryGrid block_pixels(view.height(), view.width());
  for (int v = 0; v < view.height(); ++v) {
    for (int u = 0; u < view.width(); ++u) {
      block_pixels(v, u) =
          blocks.labels(v / BlockGrid::kBlockSize, u / BlockGrid::kBlockSize);
    }
  }
  writePgm(block_pixels, (fs::path(out_dir) / "frame_blocks.pgm").string());

  const auto boundary = extractBoundary(blocks);
  if (!boundary) {
    std::cout << "no feasible trajectory: bottom-center block is not ground\n";
    return 1;
  }
  const GroundBoundary safe = erodeBoundary(*boundary, ep.erode_rows, ep.erode_cols);
  const TraversabilityImage binary =
      boundaryToBinary(safe, ep.camera, view.camera_pose);

  const CandidateSet candidates = sampleTrajectories(
      pose, ep.candidate_count, ep.kappa_max, ep.horizon, ep.spacing, ep.map);
  FeasibilityResult feasibility;
  for (const Trajectory& candidate : candidates.candidates) {
    feasibility.entries.push_back(
        collisionCheck(candidate, binary, ep.camera, ep.footprint_width));
  }

  const auto grey = [&](int v, int u) {
    return binary.pixels(v, u) ? uint8_t{220} : uint8_t{40};
  };
  RgbImage poses_img(view.width(), view.height());
  RgbImage overlay(view.width(), view.height());
  for (int v = 0; v < view.height(); ++v) {
    for (int u = 0; u < view.width(); ++u) {
      poses_img.set(v, u, grey(v, u), grey(v, u), grey(v, u));
      overlay.set(v, u, grey(v, u), grey(v, u), grey(v, u));
    }
  }
  for (size_t i = 0; i < candidates.candidates.size(); ++i) {
    const Trajectory& traj = candidates.candidates[i];
    const int blocked = feasibility.entries[i].first_blocked.value_or(-1);
    const int last_ok = blocked >= 0 ? blocked - 1 : -1;
    drawFootprint(poses_img, traj, binary, ep.camera, ep.footprint_width,
                  last_ok < 0 ? -1 : last_ok, 70, 200, 70);
    if (blocked >= 0) {
      Trajectory tail = traj;
      tail.poses.erase(tail.poses.begin(), tail.poses.begin() + blocked);
      drawFootprint(poses_img, tail, binary, ep.camera, ep.footprint_width, 0,
                    210, 60, 60);
    }
    drawFootprint(overlay, traj, binary, ep.camera, ep.footprint_width,
                  last_ok < 0 ? -1 : last_ok, 70, 200, 70);
  }

  const auto selection =
      selectTrajectory(feasibility, candidates, ep.min_progress);
  if (selection) {
    drawFootprint(overlay, selection->trajectory, binary, ep.camera,
                  ep.footprint_width, -1, 60, 90, 230);
  }
  writePpm(poses_img, (fs::path(out_dir) / "frame_poses.ppm").string());
  writePpm(overlay, (fs::path(out_dir) / "frame_overlay.ppm").string());

  if (!selection) {
    std::cout << "no feasible trajectory: best feasible length below "
              << ep.min_progress << " m\n";
    return 1;
  }
  std::cout << "selected kappa: " << selection->trajectory.kappa << "\n"
            << "feasible length: " << selection->trajectory.max_arclength << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snake-robot gait reduction, perception-space planning, and "
               "navigation simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out", mode;
  std::optional<uint64_t> seed;
  std::vector<double> pose_values;

  app.add_option("--config", config_path, "scenario config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "override the scenario seed");
  app.add_option("--mode", mode, "reduced | high-fidelity");

  bool dump_frames = false;
  CLI::App* sweep = app.add_subcommand("sweep", "run the (A, kappa) sweep and fit");
  CLI::App* run = app.add_subcommand("run", "run a navigation episode");
  run->add_flag("--dump-frames", dump_frames, "write frame_<cycle>.pgm per cycle");
  CLI::App* plan = app.add_subcommand("plan-once", "plan a single frame");
  plan->add_option("--pose", pose_values, "planning pose: x y theta")->expected(3);

  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioConfig config = loadConfigOrDefault(config_path);
    applyOverrides(config, seed, mode);
    if (sweep->parsed()) return runSweep(config, out_dir);
    if (run->parsed()) return runEpisodeCommand(config, out_dir, dump_frames);
    if (plan->parsed()) return runPlanOnce(config, out_dir, pose_values);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
