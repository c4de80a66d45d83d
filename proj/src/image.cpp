#include "serpnav/image.hpp"

#include <fstream>
#include <stdexcept>
#include <vector>

namespace serpnav {

void writePgm(const BinaryGrid& pixels, std::ostream& out) {
  out << "P5\n" << pixels.cols() << " " << pixels.rows() << "\n1\n";
  std::vector<char> row(pixels.cols());
  for (Eigen::Index r = 0; r < pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < pixels.cols(); ++c) {
      row[c] = static_cast<char>(pixels(r, c) ? 1 : 0);
    }
    out.write(row.data(), row.size());
  }
}

void writePgm(const BinaryGrid& pixels, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write PGM file: " + path);
  writePgm(pixels, out);
}

BinaryGrid readPgm(std::istream& in) {
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::runtime_error("not a binary PGM (P5) stream");
  int width = 0, height = 0, maxval = 0;
  in >> width >> height >> maxval;
  if (!in || width <= 0 || height <= 0 || maxval < 1 || maxval > 255) {
    throw std::runtime_error("malformed PGM header");
  }
  in.get();  // single whitespace after maxval
  BinaryGrid pixels(height, width);
  std::vector<char> row(width);
  for (int r = 0; r < height; ++r) {
    in.read(row.data(), row.size());
    if (!in) throw std::runtime_error("truncated PGM data");
    for (int c = 0; c < width; ++c) {
      pixels(r, c) = row[c] != 0 ? 1 : 0;
    }
  }
  return pixels;
}

RgbImage::RgbImage(int w, int h, uint8_t r, uint8_t g, uint8_t b)
    : width(w), height(h), data(static_cast<size_t>(w) * h * 3) {
  for (size_t i = 0; i < data.size(); i += 3) {
    data[i] = r;
    data[i + 1] = g;
    data[i + 2] = b;
  }
}

void RgbImage::set(int row, int col, uint8_t r, uint8_t g, uint8_t b) {
  if (row < 0 || row >= height || col < 0 || col >= width) return;
  const size_t i = 3 * (static_cast<size_t>(row) * width + col);
  data[i] = r;
  data[i + 1] = g;
  data[i + 2] = b;
}

void writePpm(const RgbImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write PPM file: " + path);
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data.data()), image.data.size());
}

}  // namespace serpnav
