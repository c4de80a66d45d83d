#pragma once

#include <optional>
#include <vector>

#include "serpnav/camera.hpp"
#include "serpnav/gait.hpp"
#include "serpnav/image.hpp"
#include "serpnav/kinematics.hpp"

namespace serpnav {

/// Constant-curvature candidate: the steering curvature plus the arc poses
/// sampled every `sample_spacing` meters from the current pose.
struct Trajectory {
  double kappa{0};           // steering curvature of this candidate, 1/m
  double max_arclength{0};   // m
  double sample_spacing{0};  // m
  std::vector<Pose2d> poses;
};

struct CandidateSet {
  std::vector<Trajectory> candidates;
};

struct FeasibilityEntry {
  double feasible_length{0};             // m
  std::optional<int> first_blocked;      // pose index of the first failure
};

struct FeasibilityResult {
  std::vector<FeasibilityEntry> entries;
};

enum class ProjectionStatus { kInView, kOutOfView };

/// Image-space footprint segment; `a`/`b` are pixel endpoints (valid unless
/// `behind` is set), and status follows the strict in-image rule.
struct FootprintProjection {
  ProjectionStatus status{ProjectionStatus::kOutOfView};
  Eigen::Vector2d a{0, 0};
  Eigen::Vector2d b{0, 0};
  bool behind{false};
};

/// n curvature values evenly spaced over [-kappa_max, kappa_max] (n odd, so
/// the straight candidate is included); poses follow the unicycle arcs of the
/// fitted map at arclength steps of `spacing` up to `horizon`.
CandidateSet sampleTrajectories(const Pose2d& pose, int n, double kappa_max,
                                double horizon, double spacing,
                                const ReductionMap& map);

/// Projects the head footprint at `world_pose` into the camera at
/// `camera_pose` through the ground plane.
FootprintProjection projectFootprint(const Pose2d& world_pose,
                                     const Pose2d& camera_pose,
                                     const CameraModel& cam, double width);

/// All pixels on the discrete line between two integer endpoints
/// (round-half-up parametric walk along the dominant axis).
std::vector<Eigen::Vector2i> discreteLine(const Eigen::Vector2i& a,
                                          const Eigen::Vector2i& b);

/// Walks the candidate poses in order and truncates at the first pose whose
/// projected footprint leaves the image to the side/top, falls behind the
/// camera, or covers any non-traversable pixel. Poses projecting entirely
/// below the bottom image row are in the blind near field the robot already
/// occupies and pass. feasible_length = spacing * (last fully valid index).
FeasibilityEntry collisionCheck(const Trajectory& traj,
                                const TraversabilityImage& image,
                                const CameraModel& cam, double width);

struct Selection {
  Trajectory trajectory;  // truncated to its feasible length
  int index{0};           // position within the candidate set
};

/// Longest feasible candidate; ties broken by least |kappa|, then by positive
/// kappa. Returns nullopt when the best feasible length is below
/// `min_progress` (caller stops the robot).
std::optional<Selection> selectTrajectory(const FeasibilityResult& results,
                                          const CandidateSet& candidates,
                                          double min_progress);

}  // namespace serpnav
