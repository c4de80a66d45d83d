#pragma once

#include "serpnav/pose.hpp"

namespace serpnav {

/// Unicycle command: fixed forward speed v plus turn rate omega.
struct VelocityCommand {
  double v{0};      // m/s, >= 0
  double omega{0};  // rad/s
};

/// Body-frame displacement of a constant twist applied for dt seconds.
///
/// Below |omega*dt| = 1e-9 the arc expressions v/omega * sin / (1-cos) lose
/// all precision, so a straight-line formula with second-order correction is
/// used instead.
template <typename Scalar>
Pose2<Scalar> twistDisplacement(Scalar v, Scalar omega, Scalar dt) {
  const Scalar wt = omega * dt;
  if (std::abs(wt) < Scalar{1e-9}) {
    const Scalar dx = v * dt * (Scalar{1} - wt * wt / Scalar{6});
    const Scalar dy = v * dt * (wt / Scalar{2}) * (Scalar{1} - wt * wt / Scalar{12});
    return {dx, dy, normalizeAngle(wt)};
  }
  return {v / omega * std::sin(wt), v / omega * (Scalar{1} - std::cos(wt)),
          normalizeAngle(wt)};
}

/// Exact constant-twist pose propagation over dt seconds.
inline Pose2d propagate(const Pose2d& pose, const VelocityCommand& cmd, double dt) {
  return compose(pose, twistDisplacement(cmd.v, cmd.omega, dt));
}

/// Target pose expressed in the current pose's body frame.
struct PoseError {
  double along{0};    // body-x distance to target, m
  double cross{0};    // body-y distance to target, m (positive = target to the left)
  double heading{0};  // normalized heading difference, rad
};

inline PoseError poseError(const Pose2d& current, const Pose2d& target) {
  const double c = std::cos(current.theta), s = std::sin(current.theta);
  const double dx = target.x - current.x, dy = target.y - current.y;
  return {c * dx + s * dy, -s * dx + c * dy,
          normalizeAngle(target.theta - current.theta)};
}

}  // namespace serpnav
