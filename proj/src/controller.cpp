#include "serpnav/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace serpnav {

namespace {

int nearestPoseIndex(const Pose2d& pose_est, const Trajectory& traj) {
  int nearest = 0;
  double nearest_dist = std::numeric_limits<double>::max();
  for (size_t i = 0; i < traj.poses.size(); ++i) {
    const double d = (traj.poses[i].position() - pose_est.position()).norm();
    if (d < nearest_dist) {
      nearest_dist = d;
      nearest = static_cast<int>(i);
    }
  }
  return nearest;
}

}  // namespace

WaypointPick pickTargetWaypoint(const Pose2d& pose_est, const Trajectory& traj,
                                double delta) {
  if (traj.poses.empty()) throw std::invalid_argument("trajectory has no poses");
  int furthest_within = -1;
  for (size_t i = 0; i < traj.poses.size(); ++i) {
    const double d = (traj.poses[i].position() - pose_est.position()).norm();
    if (d <= delta) furthest_within = static_cast<int>(i);
  }
  const int index =
      furthest_within >= 0 ? furthest_within : nearestPoseIndex(pose_est, traj);
  return {traj.poses[index], index};
}

double feedbackOmega(const PoseError& error, double k_heading, double k_cross) {
  return k_heading * error.heading + k_cross * error.cross;
}

ControlOutput controlStep(const Pose2d& pose_est, const Trajectory& traj,
                          const ReductionMap& map, const TrackingConfig& cfg,
                          double kappa_max) {
  ControlOutput out;
  out.omega_ff = map.forwardOmega(traj.kappa);
  const WaypointPick target = pickTargetWaypoint(pose_est, traj, cfg.waypoint_radius);
  // Waypoint error measured relative to the robot's expected station on the
  // arc, so the feedforward curvature is not counted twice: exactly on the
  // trajectory the correction vanishes for any kappa.
  const Pose2d& station = traj.poses[nearestPoseIndex(pose_est, traj)];
  const PoseError raw = poseError(pose_est, target.pose);
  const PoseError expected = poseError(station, target.pose);
  const PoseError deviation{raw.along - expected.along, raw.cross - expected.cross,
                            normalizeAngle(raw.heading - expected.heading)};
  out.omega_fb = feedbackOmega(deviation, cfg.k_heading, cfg.k_cross);
  const KappaCommand cmd = kappaOfOmega(map, out.omega_ff + out.omega_fb, kappa_max);
  out.kappa_cmd = cmd.kappa;
  out.saturated = cmd.saturated;
  return out;
}

}  // namespace serpnav
