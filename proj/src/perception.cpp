#include "serpnav/perception.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

namespace serpnav {

TraversabilityImage renderBinaryView(const Scene& scene, const Pose2d& head_pose,
                                     const CameraModel& cam) {
  cam.validate();
  if (!scene.bounds.contains(head_pose.position())) {
    throw std::invalid_argument("head pose lies outside scene bounds");
  }

  TraversabilityImage image;
  image.camera_pose = head_pose;
  image.pixels = BinaryGrid::Zero(cam.height, cam.width);

  // Rotation is shared by every pixel; inline the ray math per pixel.
  const Eigen::Matrix3d r = cameraRotation(cam, head_pose.theta);
  bool any_ground = false;
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      const Eigen::Vector3d ray =
          r * Eigen::Vector3d((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
      if (ray.z() >= -1e-12) continue;
      const double t = cam.mount_height / -ray.z();
      const Eigen::Vector2d ground(head_pose.x + t * ray.x(),
                                   head_pose.y + t * ray.y());
      any_ground = true;
      if (scene.bounds.contains(ground) && !pointInAnyObstacle(ground, scene)) {
        image.pixels(v, u) = 1;
      }
    }
  }
  if (!any_ground) {
    throw std::runtime_error("degenerate camera geometry: no pixel maps to ground");
  }
  return image;
}

BlockGrid classifyBlocks(const TraversabilityImage& image, double flip_probability,
                         uint64_t seed) {
  if (!(flip_probability >= 0.0) || flip_probability >= 0.5) {
    throw std::invalid_argument("flip probability must lie in [0, 0.5)");
  }
  const int bs = BlockGrid::kBlockSize;
  if (image.height() % bs != 0 || image.width() % bs != 0) {
    throw std::invalid_argument("image dimensions must be multiples of the block size");
  }
  const int rows = image.height() / bs;
  const int cols = image.width() / bs;

  BlockGrid grid;
  grid.labels = BinaryGrid::Zero(rows, cols);
  for (int br = 0; br < rows; ++br) {
    for (int bc = 0; bc < cols; ++bc) {
      const int count =
          image.pixels.block(br * bs, bc * bs, bs, bs).cast<int>().sum();
      grid.labels(br, bc) = (2 * count >= bs * bs) ? 1 : 0;  // tie labels ground
    }
  }

  if (flip_probability > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int br = 0; br < rows; ++br) {
      for (int bc = 0; bc < cols; ++bc) {
        if (unit(rng) < flip_probability) {
          grid.labels(br, bc) = grid.labels(br, bc) ? 0 : 1;
        }
      }
    }
  }
  return grid;
}

std::optional<GroundBoundary> extractBoundary(const BlockGrid& grid) {
  const int rows = static_cast<int>(grid.labels.rows());
  const int cols = static_cast<int>(grid.labels.cols());
  const int seed_row = rows - 1;
  const int seed_col = cols / 2;  // block containing the bottom-center pixel
  if (!grid.labels(seed_row, seed_col)) return std::nullopt;

  // Flood fill (4-connected) of the ground component around the seed.
  BinaryGrid connected = BinaryGrid::Zero(rows, cols);
  std::vector<std::pair<int, int>> stack{{seed_row, seed_col}};
  connected(seed_row, seed_col) = 1;
  while (!stack.empty()) {
    const auto [r, c] = stack.back();
    stack.pop_back();
    constexpr int dr[] = {-1, 1, 0, 0};
    constexpr int dc[] = {0, 0, -1, 1};
    for (int i = 0; i < 4; ++i) {
      const int nr = r + dr[i], nc = c + dc[i];
      if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
      if (connected(nr, nc) || !grid.labels(nr, nc)) continue;
      connected(nr, nc) = 1;
      stack.emplace_back(nr, nc);
    }
  }

  // Per column the boundary is the top of the contiguous run of connected
  // ground blocks reaching up from the image bottom. Connected ground above
  // an obstacle block stays beyond the boundary: the fill below the boundary
  // must never paint across an obstacle.
  const int bs = BlockGrid::kBlockSize;
  GroundBoundary boundary;
  boundary.boundary_row = Eigen::ArrayXi::Constant(cols * bs, rows * bs - 1);
  for (int bc = 0; bc < cols; ++bc) {
    int top = -1;
    for (int br = rows - 1; br >= 0 && connected(br, bc); --br) top = br;
    if (top < 0) continue;  // blocked column keeps the bottom row
    for (int u = bc * bs; u < (bc + 1) * bs; ++u) {
      boundary.boundary_row[u] = top * bs;
    }
  }
  return boundary;
}

GroundBoundary erodeBoundary(const GroundBoundary& boundary, int rows, int cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("erosion must be non-negative");
  const int n = static_cast<int>(boundary.boundary_row.size());
  GroundBoundary out;
  out.boundary_row = boundary.boundary_row;
  for (int u = 0; u < n; ++u) {
    int worst = 0;
    for (int du = -cols; du <= cols; ++du) {
      const int v = std::clamp(u + du, 0, n - 1);
      worst = std::max(worst, boundary.boundary_row[v]);
    }
    out.boundary_row[u] = worst + rows;
  }
  return out;
}

TraversabilityImage boundaryToBinary(const GroundBoundary& boundary,
                                     const CameraModel& cam,
                                     const Pose2d& camera_pose) {
  if (boundary.boundary_row.size() != cam.width) {
    throw std::invalid_argument("boundary width does not match the camera");
  }
  TraversabilityImage image;
  image.camera_pose = camera_pose;
  image.pixels = BinaryGrid::Zero(cam.height, cam.width);
  for (int u = 0; u < cam.width; ++u) {
    for (int v = boundary.boundary_row[u] + 1; v < cam.height; ++v) {
      image.pixels(v, u) = 1;
    }
  }
  return image;
}

}  // namespace serpnav
