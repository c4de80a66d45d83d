#pragma once

#include <cstdint>
#include <optional>

#include "serpnav/camera.hpp"
#include "serpnav/image.hpp"
#include "serpnav/scene.hpp"

namespace serpnav {

/// Renders the oracle ground/not-ground view from the head camera: each pixel
/// is back-projected through the flat-ground homography and labeled true iff
/// the ground point is inside bounds and obstacle-free. Pixels at or above
/// the horizon are false. Throws when the camera sees no ground at all.
TraversabilityImage renderBinaryView(const Scene& scene, const Pose2d& head_pose,
                                     const CameraModel& cam);

/// Majority-vote labels over 40x40 blocks (ties label ground), then each
/// block flipped independently with `flip_probability` using `seed`.
BlockGrid classifyBlocks(const TraversabilityImage& image, double flip_probability,
                         uint64_t seed);

/// Boundary of the ground component connected to the bottom-center block.
/// Columns with no connected ground block get the bottom row. Returns nullopt
/// when the bottom-center block is not ground (frame fully blocked).
std::optional<GroundBoundary> extractBoundary(const BlockGrid& grid);

/// Column-wise fill: rows strictly below the boundary are traversable.
TraversabilityImage boundaryToBinary(const GroundBoundary& boundary,
                                     const CameraModel& cam,
                                     const Pose2d& camera_pose);

/// Conservative margin: pushes every column's boundary down by `rows` pixels
/// and takes the worst boundary over a +-`cols` horizontal window.
GroundBoundary erodeBoundary(const GroundBoundary& boundary, int rows, int cols);

}  // namespace serpnav
