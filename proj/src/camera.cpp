#include "serpnav/camera.hpp"

#include <cmath>
#include <stdexcept>

namespace serpnav {

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw std::invalid_argument("focal lengths must be positive");
  }
  if (cx <= 0.0 || cx >= width - 1 || cy <= 0.0 || cy >= height - 1) {
    throw std::invalid_argument("principal point must lie inside the image");
  }
  if (!(mount_height > 0.0)) {
    throw std::invalid_argument("camera must be mounted above the ground");
  }
  // The bottom image row must look at ground in front of the robot.
  const double bottom_depression =
      mount_pitch + std::atan2(height - 1 - cy, fy);
  if (!(bottom_depression > 0.0)) {
    throw std::invalid_argument("camera pitch leaves the whole image above ground");
  }
}

Eigen::Matrix3d cameraRotation(const CameraModel& cam, double heading) {
  const double cp = std::cos(cam.mount_pitch), sp = std::sin(cam.mount_pitch);
  // Camera axes in the heading-aligned frame (x forward, y left, z up).
  const Eigen::Vector3d x_cam(0.0, -1.0, 0.0);
  const Eigen::Vector3d y_cam(-sp, 0.0, -cp);
  const Eigen::Vector3d z_cam(cp, 0.0, -sp);
  Eigen::Matrix3d r_local;
  r_local.col(0) = x_cam;
  r_local.col(1) = y_cam;
  r_local.col(2) = z_cam;
  Eigen::Matrix3d yaw = Eigen::Matrix3d::Identity();
  const double c = std::cos(heading), s = std::sin(heading);
  yaw(0, 0) = c;
  yaw(0, 1) = -s;
  yaw(1, 0) = s;
  yaw(1, 1) = c;
  return yaw * r_local;
}

std::optional<Eigen::Vector2d> pixelToGround(const CameraModel& cam,
                                             const Pose2d& camera_pose, double u,
                                             double v) {
  const Eigen::Matrix3d r = cameraRotation(cam, camera_pose.theta);
  const Eigen::Vector3d ray =
      r * Eigen::Vector3d((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
  if (ray.z() >= -1e-12) return std::nullopt;
  const double t = cam.mount_height / -ray.z();
  return Eigen::Vector2d(camera_pose.x + t * ray.x(), camera_pose.y + t * ray.y());
}

std::optional<Eigen::Vector2d> groundToPixel(const CameraModel& cam,
                                             const Pose2d& camera_pose,
                                             const Eigen::Vector2d& ground_point) {
  const Eigen::Matrix3d r = cameraRotation(cam, camera_pose.theta);
  const Eigen::Vector3d world(ground_point.x() - camera_pose.x,
                              ground_point.y() - camera_pose.y, -cam.mount_height);
  const Eigen::Vector3d in_cam = r.transpose() * world;
  if (in_cam.z() <= 1e-9) return std::nullopt;
  return Eigen::Vector2d(cam.fx * in_cam.x() / in_cam.z() + cam.cx,
                         cam.fy * in_cam.y() / in_cam.z() + cam.cy);
}

double horizonRow(const CameraModel& cam) {
  // Ray depression angle 0 at row: v = cy - fy * tan(pitch).
  return cam.cy - cam.fy * std::tan(cam.mount_pitch);
}

}  // namespace serpnav
