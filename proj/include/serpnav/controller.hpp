#pragma once

#include "serpnav/gait.hpp"
#include "serpnav/kinematics.hpp"
#include "serpnav/planner.hpp"

namespace serpnav {

/// Trajectory-tracking parameters.
struct TrackingConfig {
  double waypoint_radius{0.060};  // lookahead ball delta, m
  int replan_cycles{4};
  // Tuned for monotone contraction under the 2.5 s per-cycle discrete
  // control; larger gains limit-cycle around the reference.
  double k_heading{0.6};  // 1/s
  double k_cross{2.0};    // 1/(m*s)
};

/// Per-cycle control decision: feedforward and feedback turn rates plus the
/// curvature command obtained through the inverse reduction map.
struct ControlOutput {
  double omega_ff{0};
  double omega_fb{0};
  double kappa_cmd{0};
  bool saturated{false};
};

struct WaypointPick {
  Pose2d pose;
  int index{0};
};

/// Furthest trajectory pose within `delta` of the estimated position; falls
/// back to the nearest pose when nothing is within the ball.
WaypointPick pickTargetWaypoint(const Pose2d& pose_est, const Trajectory& traj,
                                double delta);

/// omega_fb = k_heading * heading_error + k_cross * cross_error.
double feedbackOmega(const PoseError& error, double k_heading, double k_cross);

/// Feedforward turn rate of the tracked curvature plus the feedback
/// correction, inverted to a clamped curvature command.
ControlOutput controlStep(const Pose2d& pose_est, const Trajectory& traj,
                          const ReductionMap& map, const TrackingConfig& cfg,
                          double kappa_max);

}  // namespace serpnav
