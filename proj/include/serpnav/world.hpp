#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "serpnav/camera.hpp"
#include "serpnav/controller.hpp"
#include "serpnav/gait.hpp"
#include "serpnav/localization.hpp"
#include "serpnav/planner.hpp"
#include "serpnav/scene.hpp"

namespace serpnav {

/// Ground-truth robot state advanced one gait cycle at a time.
struct RobotState {
  Pose2d pose;
  double commanded_kappa{0};
  double gait_phase{0};  // [0, 1)
  int cycle_index{0};
};

enum class TerminationCause { kGoalReached, kCollision, kBudgetExhausted };

struct CycleRecord {
  int cycle{0};
  Pose2d true_pose;
  Pose2d est_pose;
  double kappa_cmd{0};
  double omega_ff{0};
  double omega_fb{0};
  int traj_id{-1};
  bool collision{false};
};

/// Planner output retained for auditing: the poses certified collision-free
/// at a replan, expressed in the ground-truth frame.
struct ReplanRecord {
  int cycle{0};
  int selected_index{-1};  // -1 when no candidate was feasible
  double feasible_length{0};
  std::vector<Pose2d> certified_poses;
};

struct EpisodeLog {
  std::vector<CycleRecord> records;
  std::vector<ReplanRecord> replans;
  TerminationCause termination{TerminationCause::kBudgetExhausted};
  int sensing_events{0};
};

enum class SimMode { kReduced, kHighFidelity };

/// Everything one episode needs beyond the scene.
struct EpisodeConfig {
  GaitParams gait;
  FrictionCoefficients friction;
  GaitSimOptions sim;
  CameraModel camera;
  ReductionMap map;

  int candidate_count{5};
  double kappa_max{2.0};
  double horizon{0.5};
  double spacing{0.02};
  double min_progress{0.02};
  double footprint_width{0.051};
  // Safety erosion of the traversable region before planning, in pixels.
  // Block labeling can misplace the boundary by one 40-px block; eroding in
  // image space compensates at every range without widening the footprint.
  int erode_rows{40};
  int erode_cols{24};
  // The candidate fan is rooted at the heading toward the goal, corrected by
  // at most this much per replan. The cap keeps the turn-in trackable and the
  // rotated fan's near-field footprints inside the camera FOV.
  double goal_heading_clamp{0.18};

  TrackingConfig tracking;

  double flip_probability{0.0};
  bool odometry_noise_enabled{false};
  OdometryNoise odometry_noise;
  GatingConfig gating;  // zero gates are replaced by 3-sigma defaults

  uint64_t seed{1};
  SimMode mode{SimMode::kReduced};
  int cycle_budget{400};
  std::string frame_dump_dir;  // when set, writes frame_<cycle>.pgm per cycle
};

/// True iff the head footprint segment intersects any obstacle or exits the
/// scene bounds.
bool checkCollision(const Pose2d& pose, const Scene& scene, double footprint_width);

/// Advances the pose by the reduced unicycle model over one sensing interval
/// (dt defaults to the 2.5 s gait cycle).
RobotState stepCycle(const RobotState& state, const ReductionMap& map,
                     double dt = 2.5, double cycle_period = 2.5);

/// Runs the full perceive -> localize -> plan -> track loop until the goal,
/// a ground-truth collision, or the cycle budget.
EpisodeLog runEpisode(const Scene& scene, const EpisodeConfig& config);

/// CSV with the exact column set
/// cycle,x_true,y_true,theta_true,x_est,y_est,theta_est,kappa_cmd,omega_ff,omega_fb,traj_id,collision
void writeEpisodeCsv(const EpisodeLog& log, std::ostream& out);

}  // namespace serpnav
