#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "serpnav/pose.hpp"

namespace serpnav {

using BinaryGrid = Eigen::Array<uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary ground/not-ground image (1 = traversable) with the capture pose.
/// pixels(row, col), row 0 at the top of the image.
struct TraversabilityImage {
  BinaryGrid pixels;
  Pose2d camera_pose;

  int height() const { return static_cast<int>(pixels.rows()); }
  int width() const { return static_cast<int>(pixels.cols()); }
};

/// Block-wise labels over 40x40-pixel tiles (1 = ground).
struct BlockGrid {
  static constexpr int kBlockSize = 40;
  BinaryGrid labels;  // labels(block_row, block_col)
};

/// Per-pixel-column row index of the ground-obstacle boundary.
struct GroundBoundary {
  Eigen::ArrayXi boundary_row;
};

/// PGM (P5, maxval 1) I/O for binary images.
void writePgm(const BinaryGrid& pixels, std::ostream& out);
void writePgm(const BinaryGrid& pixels, const std::string& path);
BinaryGrid readPgm(std::istream& in);

/// RGB image buffer for debug overlays, written as binary PPM (P6).
struct RgbImage {
  int width{0};
  int height{0};
  std::vector<uint8_t> data;  // row-major RGB triples

  RgbImage(int w, int h, uint8_t r = 0, uint8_t g = 0, uint8_t b = 0);
  void set(int row, int col, uint8_t r, uint8_t g, uint8_t b);
};

void writePpm(const RgbImage& image, const std::string& path);

}  // namespace serpnav
