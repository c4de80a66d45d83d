#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "serpnav/pose.hpp"

namespace serpnav {

struct Disc {
  Eigen::Vector2d center{0, 0};
  double radius{0};
};

/// Convex polygon, vertices in counter-clockwise order.
struct ConvexPolygon {
  std::vector<Eigen::Vector2d> vertices;
};

using Obstacle = std::variant<Disc, ConvexPolygon>;

struct Rect {
  Eigen::Vector2d min{0, 0};
  Eigen::Vector2d max{0, 0};

  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y();
  }
};

/// Ground-truth planar world: bounds, obstacle footprints, goal disc, start.
struct Scene {
  Rect bounds;
  std::vector<Obstacle> obstacles;
  Disc goal;
  Pose2d start;

  void validate() const;
};

bool pointInObstacle(const Eigen::Vector2d& p, const Obstacle& obstacle);
bool pointInAnyObstacle(const Eigen::Vector2d& p, const Scene& scene);

/// Distance from p to the obstacle boundary; negative inside.
double obstacleSignedDistance(const Eigen::Vector2d& p, const Obstacle& obstacle);

bool segmentHitsObstacle(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Obstacle& obstacle);

/// Minimum distance from segment ab to any obstacle boundary or bounds edge;
/// negative when penetrating.
double segmentClearance(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                        const Scene& scene);

/// Endpoints of the head footprint: a width-wise ground segment centered at
/// the pose, perpendicular to the heading.
std::pair<Eigen::Vector2d, Eigen::Vector2d> footprintSegment(const Pose2d& pose,
                                                             double width);

/// Scene file I/O ("format: 1" structured text). Throws std::runtime_error
/// with a line diagnostic on malformed input or unsupported format versions.
Scene parseScene(std::istream& in);
Scene loadScene(const std::string& path);
void writeScene(const Scene& scene, std::ostream& out);

}  // namespace serpnav
