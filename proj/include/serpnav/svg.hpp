#pragma once

#include <string>

#include "serpnav/scene.hpp"
#include "serpnav/world.hpp"

namespace serpnav {

/// Overhead plot: bounds, obstacles, goal disc, start marker, ground-truth
/// path (solid) and estimated path (dashed).
void writeTrajectorySvg(const Scene& scene, const EpisodeLog& log,
                        const std::string& path);

/// Per-cycle curvature commands: the tracked trajectory's feedforward
/// curvature versus the feedback-corrected command.
void writeCurvatureSvg(const EpisodeLog& log, const ReductionMap& map,
                       double kappa_max, const std::string& path);

}  // namespace serpnav
