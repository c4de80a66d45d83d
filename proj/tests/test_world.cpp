#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "serpnav/world.hpp"

namespace {
double depression_from_row(const serpnav::CameraModel& cam, double row_offset) {
  return cam.mount_pitch + std::atan2(row_offset, cam.fy);
}
}  // namespace

using namespace serpnav;

namespace {

Scene corridorScene() {
  Scene scene;
  scene.bounds = {{0.0, 0.0}, {4.6, 2.4}};
  scene.start = {0.4, 1.2, 0.0};
  scene.goal = {{4.1, 1.2}, 0.2};
  return scene;
}

Scene threeObstacleScene() {
  Scene scene = corridorScene();
  scene.obstacles.push_back(Disc{{1.4, 1.21}, 0.12});
  scene.obstacles.push_back(Disc{{2.5, 0.9}, 0.16});
  scene.obstacles.push_back(
      ConvexPolygon{{{3.34, 1.21}, {3.66, 1.21}, {3.66, 1.49}, {3.34, 1.49}}});
  return scene;
}

EpisodeConfig testEpisodeConfig() {
  EpisodeConfig config;
  config.gait.wavelength = 0.10;
  config.kappa_max = 3.5;
  config.map.v_forward = 0.014005596270886433;
  config.map.omega_slope = -0.013653129949256465;
  config.map.omega_intercept = 0.0;
  config.map.fit_r_squared = 1.0;
  config.odometry_noise_enabled = false;
  config.seed = 1;
  return config;
}

}  // namespace

TEST_CASE("checkCollision: empty scene, inside obstacle, bounds exit") {
  const Scene corridor = corridorScene();
  CHECK_FALSE(checkCollision({2.0, 1.2, 0.3}, corridor, 0.051));
  CHECK(checkCollision({0.01, 1.2, M_PI / 2}, corridor, 0.051));  // at the wall

  const Scene scene = threeObstacleScene();
  CHECK(checkCollision({1.4, 1.32, 0.0}, scene, 0.051));   // inside the disc
  CHECK(checkCollision({3.5, 1.35, 1.0}, scene, 0.051));   // inside the box
  CHECK_FALSE(checkCollision({2.0, 1.8, 0.0}, scene, 0.051));
}

TEST_CASE("checkCollision matches a 1 mm occupancy-grid oracle") {
  const Scene scene = threeObstacleScene();
  constexpr double kRes = 0.001;

  // Rasterized oracle: occupancy sampled at cell centers, footprint walked
  // at sub-resolution steps.
  const auto oracle = [&](const Pose2d& pose, double width) {
    const auto [a, b] = footprintSegment(pose, width);
    const int steps = 128;
    for (int i = 0; i <= steps; ++i) {
      const Eigen::Vector2d p = a + (b - a) * (static_cast<double>(i) / steps);
      const Eigen::Vector2d cell(
          (std::floor(p.x() / kRes) + 0.5) * kRes,
          (std::floor(p.y() / kRes) + 0.5) * kRes);
      if (!scene.bounds.contains(cell) || pointInAnyObstacle(cell, scene)) {
        return true;
      }
    }
    return false;
  };

  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> x(0.1, 4.5), y(0.1, 2.3), t(-M_PI, M_PI);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const Pose2d pose{x(rng), y(rng), t(rng)};
    const auto [a, b] = footprintSegment(pose, 0.051);
    // Skip poses within the 2 mm boundary band of an obstacle or wall.
    if (std::abs(segmentClearance(a, b, scene)) < 0.002) continue;
    CHECK(checkCollision(pose, scene, 0.051) == oracle(pose, 0.051));
    ++compared;
  }
  CHECK(compared > 900);
}

TEST_CASE("stepCycle: straight advance and half-cycle composition") {
  ReductionMap map;
  map.v_forward = 0.014;
  map.omega_slope = -0.0136;
  map.omega_intercept = 0.0;

  RobotState state;
  state.pose = {0, 0, 0};
  state.commanded_kappa = 0.0;
  const RobotState next = stepCycle(state, map);
  CHECK(next.pose.x == doctest::Approx(0.014 * 2.5));
  CHECK(next.pose.y == 0.0);
  CHECK(next.cycle_index == 1);
  CHECK(next.gait_phase == doctest::Approx(0.0));

  state.commanded_kappa = 1.3;
  const RobotState full = stepCycle(state, map);
  const RobotState half = stepCycle(stepCycle(state, map, 1.25), map, 1.25);
  CHECK(half.pose.x == doctest::Approx(full.pose.x).epsilon(1e-12));
  CHECK(half.pose.y == doctest::Approx(full.pose.y).epsilon(1e-12));
  CHECK(half.pose.theta == doctest::Approx(full.pose.theta).epsilon(1e-12));
  CHECK(half.cycle_index == 1);
}

TEST_CASE("scene file parsing round trip and validation") {
  const Scene scene = threeObstacleScene();
  std::stringstream stream;
  writeScene(scene, stream);
  const Scene back = parseScene(stream);
  CHECK(back.obstacles.size() == 3);
  CHECK(back.start.x == doctest::Approx(0.4));
  CHECK(back.goal.radius == doctest::Approx(0.2));

  std::stringstream bad_version("format: 2\nbounds: 0 0 1 1\nstart: 0.5 0.5 0\ngoal: 0.9 0.5 0.05\n");
  CHECK_THROWS(parseScene(bad_version));
  std::stringstream missing("format: 1\nbounds: 0 0 1 1\n");
  CHECK_THROWS(parseScene(missing));
  std::stringstream unknown("format: 1\nbounds: 0 0 1 1\nstart: 0.5 0.5 0\ngoal: 0.9 0.5 0.05\nwall: 1 2\n");
  CHECK_THROWS(parseScene(unknown));
}

TEST_CASE("runEpisode: empty corridor reaches the goal with no collisions") {
  const Scene scene = corridorScene();
  const EpisodeConfig config = testEpisodeConfig();
  const EpisodeLog log = runEpisode(scene, config);
  CHECK(log.termination == TerminationCause::kGoalReached);
  for (const CycleRecord& r : log.records) CHECK_FALSE(r.collision);
  CHECK(log.records.size() > 50);
  CHECK(log.records.back().true_pose.x > 3.8);
}

TEST_CASE("runEpisode: goal behind a wall of obstacles exhausts the budget") {
  Scene scene = corridorScene();
  // A wall across the corridor, no way through.
  for (double y = 0.1; y <= 2.3; y += 0.25) {
    scene.obstacles.push_back(Disc{{2.0, y}, 0.16});
  }
  EpisodeConfig config = testEpisodeConfig();
  config.cycle_budget = 120;
  const EpisodeLog log = runEpisode(scene, config);
  CHECK(log.termination == TerminationCause::kBudgetExhausted);
  CHECK(static_cast<int>(log.records.size()) == config.cycle_budget);
  for (const CycleRecord& r : log.records) CHECK_FALSE(r.collision);
}

TEST_CASE("runEpisode: start inside an obstacle terminates at cycle 0") {
  Scene scene = corridorScene();
  scene.obstacles.push_back(Disc{{0.9, 1.2}, 0.12});
  scene.start = {0.85, 1.2, 0.0};
  const EpisodeLog log = runEpisode(scene, testEpisodeConfig());
  CHECK(log.termination == TerminationCause::kCollision);
  REQUIRE(log.records.size() == 1);
  CHECK(log.records[0].cycle == 0);
  CHECK(log.records[0].collision);
}

TEST_CASE("runEpisode: three-obstacle scene reaches the goal on a curved path") {
  const Scene scene = threeObstacleScene();
  const EpisodeConfig config = testEpisodeConfig();
  const EpisodeLog log = runEpisode(scene, config);
  REQUIRE(log.termination == TerminationCause::kGoalReached);
  double max_deviation = 0.0;
  for (const CycleRecord& r : log.records) {
    CHECK_FALSE(r.collision);
    max_deviation = std::max(max_deviation, std::abs(r.true_pose.y - 1.2));
  }
  // The ground-truth path bends by more than the first obstacle's radius.
  CHECK(max_deviation > 0.12);
}

TEST_CASE("runEpisode: cadence - one record per cycle, replans every 4th") {
  const Scene scene = threeObstacleScene();
  const EpisodeConfig config = testEpisodeConfig();
  const EpisodeLog log = runEpisode(scene, config);
  CHECK(log.sensing_events == static_cast<int>(log.records.size()));
  for (size_t i = 0; i < log.records.size(); ++i) {
    CHECK(log.records[i].cycle == static_cast<int>(i));
  }
  REQUIRE_FALSE(log.replans.empty());
  for (size_t i = 0; i < log.replans.size(); ++i) {
    CHECK(log.replans[i].cycle == static_cast<int>(4 * i));
  }
}

TEST_CASE("runEpisode: deterministic logs, seed changes noisy runs") {
  const Scene scene = threeObstacleScene();
  EpisodeConfig config = testEpisodeConfig();
  config.odometry_noise_enabled = true;
  config.seed = 3;
  const EpisodeLog a = runEpisode(scene, config);
  const EpisodeLog b = runEpisode(scene, config);
  REQUIRE(a.records.size() == b.records.size());
  std::stringstream sa, sb;
  writeEpisodeCsv(a, sa);
  writeEpisodeCsv(b, sb);
  CHECK(sa.str() == sb.str());

  config.seed = 4;
  const EpisodeLog c = runEpisode(scene, config);
  std::stringstream sc;
  writeEpisodeCsv(c, sc);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("runEpisode: noise-free estimate equals ground truth bit-for-bit") {
  const Scene scene = threeObstacleScene();
  const EpisodeConfig config = testEpisodeConfig();
  const EpisodeLog log = runEpisode(scene, config);
  for (const CycleRecord& r : log.records) {
    CHECK(r.true_pose.x == r.est_pose.x);
    CHECK(r.true_pose.y == r.est_pose.y);
    CHECK(r.true_pose.theta == r.est_pose.theta);
  }
}

namespace {

// Ground extent of one 40-px block row at viewing range d: the depth of
// world the coarsest mislabeled block can hide at that range.
double blockRangeExtent(const CameraModel& cam, double d) {
  const double depression = std::atan2(cam.mount_height, d);
  const double row_offset = cam.fy * std::tan(depression - cam.mount_pitch);
  const double upper = depression_from_row(cam, row_offset - 40.0);
  if (upper <= 1e-6) return 1.0;  // block reaches the horizon
  return std::min(1.0, cam.mount_height / std::tan(upper) - d);
}

}  // namespace

TEST_CASE("runEpisode: noise-free safety audit over certified poses") {
  const Scene scene = threeObstacleScene();
  const EpisodeConfig config = testEpisodeConfig();
  const EpisodeLog log = runEpisode(scene, config);
  // Certified poses may penetrate at most the ground extent of one block at
  // their viewing range (the labeling granularity); visited poses must be
  // strictly collision-free.
  for (const ReplanRecord& replan : log.replans) {
    for (size_t i = 0; i < replan.certified_poses.size(); ++i) {
      const Pose2d& pose = replan.certified_poses[i];
      if (!checkCollision(pose, scene, config.footprint_width)) continue;
      const double range = i * config.spacing;
      const auto [a, b] = footprintSegment(pose, config.footprint_width);
      const double penetration = -segmentClearance(a, b, scene);
      CHECK(penetration <= blockRangeExtent(config.camera, range));
    }
  }
  for (const CycleRecord& r : log.records) {
    CHECK_FALSE(checkCollision(r.true_pose, scene, config.footprint_width));
  }
}

TEST_CASE("runEpisode: high-fidelity mode heading stays near the reduced mode") {
  const Scene scene = corridorScene();
  EpisodeConfig reduced = testEpisodeConfig();
  reduced.cycle_budget = 20;
  EpisodeConfig hifi = reduced;
  hifi.mode = SimMode::kHighFidelity;
  const EpisodeLog a = runEpisode(scene, reduced);
  const EpisodeLog b = runEpisode(scene, hifi);
  REQUIRE(a.records.size() == b.records.size());
  // The reduction residual bounds the per-cycle twist mismatch; measured
  // residual on the fitted grid is below 2e-4 rad/s.
  const double residual_bound = 2e-4 * 2.5 * 20 + 0.02;
  CHECK(std::abs(normalizeAngle(a.records.back().true_pose.theta -
                                b.records.back().true_pose.theta)) <
        residual_bound);
  CHECK(std::abs(a.records.back().true_pose.x - b.records.back().true_pose.x) <
        0.1);
}
