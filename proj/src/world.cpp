#include "serpnav/world.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "serpnav/perception.hpp"

namespace serpnav {

namespace {

// Deterministic per-frame seed for the block-flip noise.
uint64_t frameSeed(uint64_t episode_seed, int cycle) {
  uint64_t h = episode_seed ^ (0x9e3779b97f4a7c15ULL * (cycle + 1));
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

// The selected candidate re-rooted at the tracking origin, truncated to the
// certified length.
Trajectory rebaseTrajectory(const Trajectory& selected, const Pose2d& root,
                            const ReductionMap& map) {
  Trajectory traj = selected;
  const VelocityCommand cmd{map.v_forward, map.forwardOmega(selected.kappa)};
  for (size_t j = 0; j < traj.poses.size(); ++j) {
    traj.poses[j] = propagate(root, cmd, j * traj.sample_spacing / map.v_forward);
  }
  return traj;
}

RelativePose toRelativePose(const Pose2d& delta) {
  return {{delta.x, delta.y}, delta.theta};
}

}  // namespace

bool checkCollision(const Pose2d& pose, const Scene& scene, double footprint_width) {
  if (!(footprint_width > 0.0)) {
    throw std::invalid_argument("footprint width must be positive");
  }
  const auto [a, b] = footprintSegment(pose, footprint_width);
  if (!scene.bounds.contains(a) || !scene.bounds.contains(b)) return true;
  for (const Obstacle& obstacle : scene.obstacles) {
    if (segmentHitsObstacle(a, b, obstacle)) return true;
  }
  return false;
}

RobotState stepCycle(const RobotState& state, const ReductionMap& map, double dt,
                     double cycle_period) {
  RobotState next = state;
  const VelocityCommand cmd{map.v_forward, map.forwardOmega(state.commanded_kappa)};
  next.pose = propagate(state.pose, cmd, dt);
  const double phase = state.gait_phase + dt / cycle_period;
  next.cycle_index = state.cycle_index + static_cast<int>(std::floor(phase + 1e-12));
  next.gait_phase = phase - std::floor(phase + 1e-12);
  return next;
}

EpisodeLog runEpisode(const Scene& scene, const EpisodeConfig& config) {
  scene.validate();
  config.gait.validate();
  config.camera.validate();
  if (config.map.omega_slope == 0.0 || !(config.map.v_forward > 0.0)) {
    throw std::invalid_argument("episode needs a fitted reduction map");
  }

  const double cycle_dt = config.gait.cyclePeriod();
  GatingConfig gates = config.gating;
  if (gates.translation_gate <= 0.0 || gates.rotation_gate <= 0.0) {
    const GatingConfig derived = defaultGates(
        config.odometry_noise, config.map.v_forward * cycle_dt);
    if (gates.translation_gate <= 0.0) gates.translation_gate = derived.translation_gate;
    if (gates.rotation_gate <= 0.0) gates.rotation_gate = derived.rotation_gate;
  }

  RobotState state;
  state.pose = scene.start;

  GaitState hifi;
  if (config.mode == SimMode::kHighFidelity) {
    GaitParams p = config.gait;
    p.curvature = 0.0;
    hifi = makeGaitState(p, config.sim);
    hifi.pose = scene.start;
  }

  // Known-motion wide-baseline initialization: one programmed cycle forward.
  const RelativePose init_delta{{config.map.v_forward * cycle_dt, 0.0}, 0.0};
  PoseEstimate est = initializeKnownMotion(scene.start, init_delta);
  OdometrySimulator odometry(config.odometry_noise, config.seed);

  EpisodeLog log;
  bool stopped = true;  // until the first replan selects a trajectory
  Trajectory tracked;
  int traj_id = -1;

  for (int cycle = 0; cycle < config.cycle_budget; ++cycle) {
    const bool hit = checkCollision(state.pose, scene, config.footprint_width);
    const bool in_goal =
        (state.pose.position() - scene.goal.center).norm() <= scene.goal.radius;
    if (hit || in_goal) {
      CycleRecord record;
      record.cycle = cycle;
      record.true_pose = state.pose;
      record.est_pose = est.pose;
      record.traj_id = traj_id;
      record.collision = hit;
      log.records.push_back(record);
      log.sensing_events += 1;
      log.termination =
          hit ? TerminationCause::kCollision : TerminationCause::kGoalReached;
      return log;
    }

    const bool replan_now = cycle % config.tracking.replan_cycles == 0;
    if (!config.frame_dump_dir.empty()) {
      const TraversabilityImage frame =
          renderBinaryView(scene, state.pose, config.camera);
      writePgm(frame.pixels, config.frame_dump_dir + "/frame_" +
                                 std::to_string(cycle) + ".pgm");
    }
    if (replan_now) {
      const TraversabilityImage view =
          renderBinaryView(scene, state.pose, config.camera);
      const BlockGrid blocks = classifyBlocks(view, config.flip_probability,
                                              frameSeed(config.seed, cycle));
      ReplanRecord replan;
      replan.cycle = cycle;
      stopped = true;
      traj_id = -1;
      if (const auto boundary = extractBoundary(blocks)) {
        const GroundBoundary safe =
            erodeBoundary(*boundary, config.erode_rows, config.erode_cols);
        const TraversabilityImage binary =
            boundaryToBinary(safe, config.camera, view.camera_pose);
        // The fan is aimed at the goal (clamped to a trackable turn-in), so
        // the straight candidate resumes the nominal route once obstacles
        // pass. Candidates for checking are rooted at the camera (the ego
        // frame); the selected arc is re-rooted at the estimate for tracking.
        const Eigen::Vector2d to_goal = scene.goal.center - est.pose.position();
        double correction = 0.0;
        if (to_goal.norm() > 1e-9) {
          correction = std::clamp(
              normalizeAngle(std::atan2(to_goal.y(), to_goal.x()) - est.pose.theta),
              -config.goal_heading_clamp, config.goal_heading_clamp);
        }
        const Pose2d fan_root{
            view.camera_pose.x, view.camera_pose.y,
            normalizeAngle(view.camera_pose.theta + correction)};
        const CandidateSet candidates = sampleTrajectories(
            fan_root, config.candidate_count, config.kappa_max, config.horizon,
            config.spacing, config.map);
        FeasibilityResult feasibility;
        feasibility.entries.reserve(candidates.candidates.size());
        for (const Trajectory& candidate : candidates.candidates) {
          feasibility.entries.push_back(collisionCheck(
              candidate, binary, config.camera, config.footprint_width));
        }
        if (const auto selection = selectTrajectory(feasibility, candidates,
                                                    config.min_progress)) {
          const Pose2d track_root{est.pose.x, est.pose.y,
                                  normalizeAngle(est.pose.theta + correction)};
          tracked = rebaseTrajectory(selection->trajectory, track_root, config.map);
          traj_id = selection->index;
          stopped = false;
          replan.selected_index = selection->index;
          replan.feasible_length = selection->trajectory.max_arclength;
          replan.certified_poses = selection->trajectory.poses;
        }
      }
      log.replans.push_back(std::move(replan));
    }

    // Hold once the certified trajectory is consumed: advancing further this
    // cycle would overshoot the poses the planner actually cleared.
    bool hold = stopped;
    if (!stopped) {
      const double remaining =
          (tracked.poses.back().position() - est.pose.position()).norm();
      hold = remaining < config.map.v_forward * cycle_dt;
    }

    CycleRecord record;
    record.cycle = cycle;
    record.true_pose = state.pose;
    record.est_pose = est.pose;
    record.traj_id = traj_id;
    if (!hold) {
      const ControlOutput out = controlStep(est.pose, tracked, config.map,
                                            config.tracking, config.kappa_max);
      record.kappa_cmd = out.kappa_cmd;
      record.omega_ff = out.omega_ff;
      record.omega_fb = out.omega_fb;
    }
    log.records.push_back(record);
    log.sensing_events += 1;

    if (!hold) {
      const Pose2d prev = state.pose;
      state.commanded_kappa = record.kappa_cmd;
      if (config.mode == SimMode::kReduced) {
        state = stepCycle(state, config.map, cycle_dt, cycle_dt);
      } else {
        GaitParams p = config.gait;
        p.curvature = record.kappa_cmd;
        integrateGait(hifi, p, config.friction, cycle_dt, config.sim);
        state.pose = hifi.pose;
        state.gait_phase = 0.0;
        state.cycle_index += 1;
      }
      const RelativePose pred = predictedDelta(record.kappa_cmd, config.map, cycle_dt);
      OdometryObservation obs;
      if (config.odometry_noise_enabled) {
        obs = odometry.observe(toRelativePose(between(prev, state.pose)));
      } else {
        obs.delta = pred;
      }
      const FusionResult fused = gateAndFuse(est, obs, pred, gates);
      if (config.odometry_noise_enabled) {
        odometry.commit(fused.accepted, gates.gating_enabled, fused.anchor_ratio);
      }
      est = fused.estimate;
    } else {
      est.cycle += 1;  // the robot holds position; time still passes
    }
  }
  log.termination = TerminationCause::kBudgetExhausted;
  return log;
}

void writeEpisodeCsv(const EpisodeLog& log, std::ostream& out) {
  out << "cycle,x_true,y_true,theta_true,x_est,y_est,theta_est,kappa_cmd,"
         "omega_ff,omega_fb,traj_id,collision\n";
  char line[512];
  for (const CycleRecord& r : log.records) {
    std::snprintf(line, sizeof(line),
                  "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%d\n",
                  r.cycle, r.true_pose.x, r.true_pose.y, r.true_pose.theta,
                  r.est_pose.x, r.est_pose.y, r.est_pose.theta, r.kappa_cmd,
                  r.omega_ff, r.omega_fb, r.traj_id, r.collision ? 1 : 0);
    out << line;
  }
}

}  // namespace serpnav
