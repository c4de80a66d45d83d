#pragma once

#include <Eigen/Dense>
#include <optional>

#include "serpnav/pose.hpp"

namespace serpnav {

/// Pinhole camera rigidly mounted at the head: height above ground, pitched
/// down, optical axis in the heading direction.
struct CameraModel {
  double fx{525.0};
  double fy{525.0};
  double cx{320.0};
  double cy{240.0};
  int width{640};
  int height{480};
  double mount_height{0.06};            // m above the ground plane
  double mount_pitch{15.0 * M_PI / 180.0};  // rad downward

  void validate() const;
};

/// World-from-camera rotation for a head at planar heading `heading`.
/// Camera axes: z optical (forward, pitched down), x image-right, y image-down.
Eigen::Matrix3d cameraRotation(const CameraModel& cam, double heading);

/// Ground point seen by pixel (u, v), or nullopt at/above the horizon.
std::optional<Eigen::Vector2d> pixelToGround(const CameraModel& cam,
                                             const Pose2d& camera_pose, double u,
                                             double v);

/// Pixel of a ground-plane point, or nullopt when behind the camera.
std::optional<Eigen::Vector2d> groundToPixel(const CameraModel& cam,
                                             const Pose2d& camera_pose,
                                             const Eigen::Vector2d& ground_point);

/// First image row that maps to ground (rows above it see the horizon/sky).
double horizonRow(const CameraModel& cam);

}  // namespace serpnav
