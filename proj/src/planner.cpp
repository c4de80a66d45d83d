#include "serpnav/planner.hpp"

#include <cmath>
#include <stdexcept>

#include "serpnav/scene.hpp"

namespace serpnav {

namespace {

// Floor division for a positive divisor.
long long floorDiv(long long num, long long den) {
  return num >= 0 ? num / den : -((-num + den - 1) / den);
}

// round(num / den) with halves toward +infinity, exact in integers.
long long roundDiv(long long num, long long den) {
  return floorDiv(2 * num + den, 2 * den);
}

Eigen::Vector2i roundPixel(const Eigen::Vector2d& p) {
  return {static_cast<int>(std::floor(p.x() + 0.5)),
          static_cast<int>(std::floor(p.y() + 0.5))};
}

}  // namespace

CandidateSet sampleTrajectories(const Pose2d& pose, int n, double kappa_max,
                                double horizon, double spacing,
                                const ReductionMap& map) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("candidate count must be odd and >= 3");
  if (!(spacing > 0.0) || horizon < spacing) {
    throw std::invalid_argument("need spacing > 0 and horizon >= spacing");
  }
  if (!(map.v_forward > 0.0)) throw std::invalid_argument("map forward speed must be positive");

  const int steps = static_cast<int>(std::floor(horizon / spacing + 1e-9));
  CandidateSet set;
  set.candidates.reserve(n);
  for (int i = 0; i < n; ++i) {
    Trajectory traj;
    traj.kappa = -kappa_max + i * (2.0 * kappa_max / (n - 1));
    if (i == (n - 1) / 2) traj.kappa = 0.0;  // exact straight candidate
    traj.max_arclength = steps * spacing;
    traj.sample_spacing = spacing;
    traj.poses.reserve(steps + 1);
    const VelocityCommand cmd{map.v_forward, map.forwardOmega(traj.kappa)};
    for (int j = 0; j <= steps; ++j) {
      traj.poses.push_back(propagate(pose, cmd, j * spacing / map.v_forward));
    }
    set.candidates.push_back(std::move(traj));
  }
  return set;
}

FootprintProjection projectFootprint(const Pose2d& world_pose,
                                     const Pose2d& camera_pose,
                                     const CameraModel& cam, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("footprint width must be positive");
  const auto [ea, eb] = footprintSegment(world_pose, width);

  FootprintProjection out;
  const auto pa = groundToPixel(cam, camera_pose, ea);
  const auto pb = groundToPixel(cam, camera_pose, eb);
  if (!pa || !pb) {
    out.behind = true;
    return out;
  }
  out.a = *pa;
  out.b = *pb;
  const auto inside = [&](const Eigen::Vector2d& p) {
    return p.x() >= 0.0 && p.x() <= cam.width - 1 && p.y() >= 0.0 &&
           p.y() <= cam.height - 1;
  };
  out.status = (inside(out.a) && inside(out.b)) ? ProjectionStatus::kInView
                                                : ProjectionStatus::kOutOfView;
  return out;
}

std::vector<Eigen::Vector2i> discreteLine(const Eigen::Vector2i& a,
                                          const Eigen::Vector2i& b) {
  const long long dx = b.x() - a.x();
  const long long dy = b.y() - a.y();
  const long long n = std::max(std::abs(dx), std::abs(dy));
  std::vector<Eigen::Vector2i> pixels;
  pixels.reserve(n + 1);
  if (n == 0) {
    pixels.push_back(a);
    return pixels;
  }
  for (long long i = 0; i <= n; ++i) {
    pixels.emplace_back(a.x() + static_cast<int>(roundDiv(i * dx, n)),
                        a.y() + static_cast<int>(roundDiv(i * dy, n)));
  }
  return pixels;
}

FeasibilityEntry collisionCheck(const Trajectory& traj,
                                const TraversabilityImage& image,
                                const CameraModel& cam, double width) {
  FeasibilityEntry entry;
  int last_valid = -1;
  bool confirmed_visible = false;  // some in-view pose has passed its check
  for (size_t i = 0; i < traj.poses.size(); ++i) {
    const FootprintProjection proj =
        projectFootprint(traj.poses[i], image.camera_pose, cam, width);
    bool valid = false;
    bool visible = false;
    if (!proj.behind) {
      // Near the camera's z = 0 plane pixel coordinates blow up; anything
      // this far outside the frame has left the checkable region. Checked on
      // the raw doubles so the int conversion below stays defined.
      const double box_x = 8.0 * cam.width, box_y = 8.0 * cam.height;
      const bool bounded =
          std::abs(proj.a.x()) <= box_x && std::abs(proj.b.x()) <= box_x &&
          std::abs(proj.a.y()) <= box_y && std::abs(proj.b.y()) <= box_y;
      const Eigen::Vector2i pa = bounded ? roundPixel(proj.a) : Eigen::Vector2i(0, 0);
      const Eigen::Vector2i pb = bounded ? roundPixel(proj.b) : Eigen::Vector2i(0, 0);
      if (bounded && pa.y() >= cam.height && pb.y() >= cam.height) {
        // Blind near field below the bottom image row: the robot is already
        // standing on it (the body follows the head).
        valid = true;
      } else if (bounded) {
        visible = true;
        valid = true;
        for (const Eigen::Vector2i& px : discreteLine(pa, pb)) {
          if (px.y() >= cam.height) continue;  // below-image tail of the segment
          if (px.x() < 0 || px.x() >= cam.width || px.y() < 0 ||
              !image.pixels(px.y(), px.x())) {
            valid = false;
            break;
          }
        }
      }
    }
    if (!valid) {
      entry.first_blocked = static_cast<int>(i);
      // Leading blind poses count only once an in-view pose has passed; an
      // immediately blocked view certifies nothing.
      if (!confirmed_visible) last_valid = -1;
      break;
    }
    if (visible) confirmed_visible = true;
    last_valid = static_cast<int>(i);
  }
  entry.feasible_length = std::max(last_valid, 0) * traj.sample_spacing;
  return entry;
}

std::optional<Selection> selectTrajectory(const FeasibilityResult& results,
                                          const CandidateSet& candidates,
                                          double min_progress) {
  if (candidates.candidates.empty() ||
      results.entries.size() != candidates.candidates.size()) {
    throw std::invalid_argument("feasibility results do not match the candidates");
  }
  int best = -1;
  for (size_t i = 0; i < results.entries.size(); ++i) {
    if (best < 0) {
      best = static_cast<int>(i);
      continue;
    }
    const double len = results.entries[i].feasible_length;
    const double best_len = results.entries[best].feasible_length;
    const double kappa = candidates.candidates[i].kappa;
    const double best_kappa = candidates.candidates[best].kappa;
    const bool wins =
        len > best_len ||
        (len == best_len && (std::abs(kappa) < std::abs(best_kappa) ||
                             (std::abs(kappa) == std::abs(best_kappa) &&
                              kappa > best_kappa)));
    if (wins) best = static_cast<int>(i);
  }
  if (results.entries[best].feasible_length < min_progress) return std::nullopt;

  Selection selection;
  selection.index = best;
  selection.trajectory = candidates.candidates[best];
  const int keep = static_cast<int>(std::llround(
                       results.entries[best].feasible_length /
                       selection.trajectory.sample_spacing)) +
                   1;
  if (keep < static_cast<int>(selection.trajectory.poses.size())) {
    selection.trajectory.poses.resize(keep);
    selection.trajectory.max_arclength = (keep - 1) * selection.trajectory.sample_spacing;
  }
  return selection;
}

}  // namespace serpnav
