#include "serpnav/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace serpnav {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void open(std::ofstream& out, const std::string& path, double width, double height) {
  out.open(path);
  if (!out) throw std::runtime_error("cannot write SVG file: " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " "
      << fmt(height) << "\">\n";
}

}  // namespace

void writeTrajectorySvg(const Scene& scene, const EpisodeLog& log,
                        const std::string& path) {
  const double margin = 20.0;
  const double scale = 200.0;  // px per meter
  const Eigen::Vector2d span = scene.bounds.max - scene.bounds.min;
  const double width = span.x() * scale + 2 * margin;
  const double height = span.y() * scale + 2 * margin;
  const auto px = [&](const Eigen::Vector2d& p) {
    // SVG y grows downward.
    return Eigen::Vector2d(margin + (p.x() - scene.bounds.min.x()) * scale,
                           height - margin - (p.y() - scene.bounds.min.y()) * scale);
  };

  std::ofstream out;
  open(out, path, width, height);
  out << "<rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\""
      << fmt(span.x() * scale) << "\" height=\"" << fmt(span.y() * scale)
      << "\" fill=\"white\" stroke=\"black\"/>\n";

  for (const Obstacle& obstacle : scene.obstacles) {
    if (const Disc* disc = std::get_if<Disc>(&obstacle)) {
      const Eigen::Vector2d c = px(disc->center);
      out << "<circle cx=\"" << fmt(c.x()) << "\" cy=\"" << fmt(c.y()) << "\" r=\""
          << fmt(disc->radius * scale) << "\" fill=\"#888888\"/>\n";
    } else {
      out << "<polygon points=\"";
      for (const Eigen::Vector2d& v : std::get<ConvexPolygon>(obstacle).vertices) {
        const Eigen::Vector2d p = px(v);
        out << fmt(p.x()) << "," << fmt(p.y()) << " ";
      }
      out << "\" fill=\"#888888\"/>\n";
    }
  }

  const Eigen::Vector2d goal = px(scene.goal.center);
  out << "<circle cx=\"" << fmt(goal.x()) << "\" cy=\"" << fmt(goal.y())
      << "\" r=\"" << fmt(scene.goal.radius * scale)
      << "\" fill=\"none\" stroke=\"#2a9d2a\" stroke-width=\"2\"/>\n";

  const auto polyline = [&](auto select, const char* style) {
    out << "<polyline fill=\"none\" " << style << " points=\"";
    for (const CycleRecord& r : log.records) {
      const Eigen::Vector2d p = px(select(r));
      out << fmt(p.x()) << "," << fmt(p.y()) << " ";
    }
    out << "\"/>\n";
  };
  polyline([](const CycleRecord& r) { return r.est_pose.position(); },
           "stroke=\"#d06010\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
  polyline([](const CycleRecord& r) { return r.true_pose.position(); },
           "stroke=\"#2a9d2a\" stroke-width=\"2\"");

  if (!log.records.empty()) {
    const Eigen::Vector2d s = px(log.records.front().true_pose.position());
    const Eigen::Vector2d e = px(log.records.back().true_pose.position());
    out << "<circle cx=\"" << fmt(s.x()) << "\" cy=\"" << fmt(s.y())
        << "\" r=\"5\" fill=\"#2a9d2a\"/>\n";
    out << "<circle cx=\"" << fmt(e.x()) << "\" cy=\"" << fmt(e.y())
        << "\" r=\"5\" fill=\"#c03030\"/>\n";
  }
  out << "</svg>\n";
}

void writeCurvatureSvg(const EpisodeLog& log, const ReductionMap& map,
                       double kappa_max, const std::string& path) {
  const double width = 640.0, height = 360.0, margin = 40.0;
  const int cycles = std::max<int>(1, static_cast<int>(log.records.size()) - 1);
  const double y_span = 2.2 * kappa_max;
  const auto px = [&](double cycle, double kappa) {
    return Eigen::Vector2d(
        margin + cycle / cycles * (width - 2 * margin),
        height / 2.0 - kappa / y_span * (height - 2 * margin));
  };

  std::ofstream out;
  open(out, path, width, height);
  out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" fill=\"white\"/>\n";
  // Axes: cycle along x, curvature about the zero line.
  out << "<line x1=\"" << fmt(margin) << "\" y1=\"" << fmt(height / 2) << "\" x2=\""
      << fmt(width - margin) << "\" y2=\"" << fmt(height / 2)
      << "\" stroke=\"#aaaaaa\"/>\n";
  out << "<line x1=\"" << fmt(margin) << "\" y1=\"" << fmt(margin) << "\" x2=\""
      << fmt(margin) << "\" y2=\"" << fmt(height - margin)
      << "\" stroke=\"#aaaaaa\"/>\n";
  out << "<text x=\"" << fmt(width / 2) << "\" y=\"" << fmt(height - 8)
      << "\" font-size=\"12\">cycle</text>\n";
  out << "<text x=\"4\" y=\"" << fmt(margin - 8) << "\" font-size=\"12\">kappa (1/m), +/-"
      << fmt(1.1 * kappa_max) << "</text>\n";

  const auto series = [&](auto value, const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const CycleRecord& r : log.records) {
      const Eigen::Vector2d p = px(r.cycle, value(r));
      out << fmt(p.x()) << "," << fmt(p.y()) << " ";
    }
    out << "\"/>\n";
  };
  // Feedforward curvature of the tracked trajectory (inverse map of
  // omega_ff) versus the feedback-corrected command.
  series(
      [&](const CycleRecord& r) {
        return (r.omega_ff - map.omega_intercept) / map.omega_slope;
      },
      "#c03030");
  series([](const CycleRecord& r) { return r.kappa_cmd; }, "#2a9d2a");
  out << "</svg>\n";
}

}  // namespace serpnav
