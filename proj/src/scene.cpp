#include "serpnav/scene.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace serpnav {

namespace {

double pointSegmentDistance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                            const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

bool segmentsIntersect(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                       const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return true;
  // Collinear / touching cases resolve through the distance checks below.
  return false;
}

bool pointInPolygon(const Eigen::Vector2d& p, const ConvexPolygon& poly) {
  const size_t n = poly.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = poly.vertices[i];
    const Eigen::Vector2d& b = poly.vertices[(i + 1) % n];
    if (cross2(b - a, p - a) < 0.0) return false;
  }
  return true;
}

std::vector<std::string> splitTokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream stream(text);
  std::string tok;
  while (stream >> tok) tokens.push_back(tok);
  return tokens;
}

double parseNumber(const std::string& tok, int line_no) {
  size_t used = 0;
  double value = 0;
  try {
    value = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) {
    throw std::runtime_error("scene line " + std::to_string(line_no) +
                             ": expected a number, got '" + tok + "'");
  }
  return value;
}

}  // namespace

void Scene::validate() const {
  if (!(bounds.max.x() > bounds.min.x()) || !(bounds.max.y() > bounds.min.y())) {
    throw std::runtime_error("scene bounds are empty");
  }
  if (!bounds.contains(start.position())) {
    throw std::runtime_error("start pose lies outside bounds");
  }
  if (!bounds.contains(goal.center)) {
    throw std::runtime_error("goal lies outside bounds");
  }
}

bool pointInObstacle(const Eigen::Vector2d& p, const Obstacle& obstacle) {
  if (const Disc* disc = std::get_if<Disc>(&obstacle)) {
    return (p - disc->center).norm() <= disc->radius;
  }
  return pointInPolygon(p, std::get<ConvexPolygon>(obstacle));
}

bool pointInAnyObstacle(const Eigen::Vector2d& p, const Scene& scene) {
  for (const Obstacle& obstacle : scene.obstacles) {
    if (pointInObstacle(p, obstacle)) return true;
  }
  return false;
}

double obstacleSignedDistance(const Eigen::Vector2d& p, const Obstacle& obstacle) {
  if (const Disc* disc = std::get_if<Disc>(&obstacle)) {
    return (p - disc->center).norm() - disc->radius;
  }
  const ConvexPolygon& poly = std::get<ConvexPolygon>(obstacle);
  double boundary = std::numeric_limits<double>::max();
  const size_t n = poly.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    boundary = std::min(boundary, pointSegmentDistance(p, poly.vertices[i],
                                                       poly.vertices[(i + 1) % n]));
  }
  return pointInPolygon(p, poly) ? -boundary : boundary;
}

bool segmentHitsObstacle(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Obstacle& obstacle) {
  if (const Disc* disc = std::get_if<Disc>(&obstacle)) {
    return pointSegmentDistance(disc->center, a, b) <= disc->radius;
  }
  const ConvexPolygon& poly = std::get<ConvexPolygon>(obstacle);
  if (pointInPolygon(a, poly) || pointInPolygon(b, poly)) return true;
  const size_t n = poly.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& c = poly.vertices[i];
    const Eigen::Vector2d& d = poly.vertices[(i + 1) % n];
    if (segmentsIntersect(a, b, c, d)) return true;
    // Touching contact: either segment endpoint on the other segment.
    if (pointSegmentDistance(a, c, d) == 0.0 || pointSegmentDistance(b, c, d) == 0.0 ||
        pointSegmentDistance(c, a, b) == 0.0 || pointSegmentDistance(d, a, b) == 0.0) {
      return true;
    }
  }
  return false;
}

double segmentClearance(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                        const Scene& scene) {
  double clearance = std::numeric_limits<double>::max();
  for (const Eigen::Vector2d& p : {a, b}) {
    clearance = std::min({clearance, p.x() - scene.bounds.min.x(),
                          scene.bounds.max.x() - p.x(), p.y() - scene.bounds.min.y(),
                          scene.bounds.max.y() - p.y()});
  }
  constexpr int kSamples = 32;
  for (const Obstacle& obstacle : scene.obstacles) {
    for (int i = 0; i <= kSamples; ++i) {
      const Eigen::Vector2d p = a + (b - a) * (static_cast<double>(i) / kSamples);
      clearance = std::min(clearance, obstacleSignedDistance(p, obstacle));
    }
  }
  return clearance;
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> footprintSegment(const Pose2d& pose,
                                                             double width) {
  const Eigen::Vector2d normal(-std::sin(pose.theta), std::cos(pose.theta));
  const Eigen::Vector2d center = pose.position();
  return {center - 0.5 * width * normal, center + 0.5 * width * normal};
}

Scene parseScene(std::istream& in) {
  Scene scene;
  bool format_seen = false, bounds_seen = false, start_seen = false, goal_seen = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const size_t colon = line.find(':');
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (colon == std::string::npos) {
      throw std::runtime_error("scene line " + std::to_string(line_no) +
                               ": expected 'key: values'");
    }
    std::string key = line.substr(0, colon);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::vector<std::string> tokens = splitTokens(line.substr(colon + 1));
    const auto num = [&](size_t i) { return parseNumber(tokens.at(i), line_no); };

    if (key == "format") {
      if (tokens.size() != 1 || tokens[0] != "1") {
        throw std::runtime_error("unsupported scene format (expected 'format: 1')");
      }
      format_seen = true;
    } else if (key == "bounds") {
      if (tokens.size() != 4) {
        throw std::runtime_error("scene line " + std::to_string(line_no) +
                                 ": bounds needs xmin ymin xmax ymax");
      }
      scene.bounds = {{num(0), num(1)}, {num(2), num(3)}};
      bounds_seen = true;
    } else if (key == "start") {
      if (tokens.size() != 3) {
        throw std::runtime_error("scene line " + std::to_string(line_no) +
                                 ": start needs x y theta");
      }
      scene.start = {num(0), num(1), normalizeAngle(num(2))};
      start_seen = true;
    } else if (key == "goal") {
      if (tokens.size() != 3) {
        throw std::runtime_error("scene line " + std::to_string(line_no) +
                                 ": goal needs cx cy radius");
      }
      scene.goal = {{num(0), num(1)}, num(2)};
      goal_seen = true;
    } else if (key == "obstacle") {
      if (tokens.empty()) {
        throw std::runtime_error("scene line " + std::to_string(line_no) +
                                 ": obstacle needs a type");
      }
      if (tokens[0] == "disc") {
        if (tokens.size() != 4) {
          throw std::runtime_error("scene line " + std::to_string(line_no) +
                                   ": disc needs cx cy radius");
        }
        scene.obstacles.push_back(Disc{{num(1), num(2)}, num(3)});
      } else if (tokens[0] == "polygon") {
        if (tokens.size() < 7 || (tokens.size() - 1) % 2 != 0) {
          throw std::runtime_error("scene line " + std::to_string(line_no) +
                                   ": polygon needs >= 3 x y vertex pairs");
        }
        ConvexPolygon poly;
        for (size_t i = 1; i + 1 < tokens.size(); i += 2) {
          poly.vertices.emplace_back(num(i), num(i + 1));
        }
        scene.obstacles.push_back(std::move(poly));
      } else {
        throw std::runtime_error("scene line " + std::to_string(line_no) +
                                 ": unknown obstacle type '" + tokens[0] + "'");
      }
    } else {
      throw std::runtime_error("scene line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
    }
  }
  if (!format_seen) throw std::runtime_error("scene file missing 'format: 1'");
  if (!bounds_seen || !start_seen || !goal_seen) {
    throw std::runtime_error("scene file missing bounds/start/goal");
  }
  scene.validate();
  return scene;
}

Scene loadScene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scene file: " + path);
  return parseScene(in);
}

void writeScene(const Scene& scene, std::ostream& out) {
  out << "format: 1\n";
  out << "bounds: " << scene.bounds.min.x() << " " << scene.bounds.min.y() << " "
      << scene.bounds.max.x() << " " << scene.bounds.max.y() << "\n";
  out << "start: " << scene.start.x << " " << scene.start.y << " "
      << scene.start.theta << "\n";
  out << "goal: " << scene.goal.center.x() << " " << scene.goal.center.y() << " "
      << scene.goal.radius << "\n";
  for (const Obstacle& obstacle : scene.obstacles) {
    if (const Disc* disc = std::get_if<Disc>(&obstacle)) {
      out << "obstacle: disc " << disc->center.x() << " " << disc->center.y() << " "
          << disc->radius << "\n";
    } else {
      out << "obstacle: polygon";
      for (const Eigen::Vector2d& v : std::get<ConvexPolygon>(obstacle).vertices) {
        out << " " << v.x() << " " << v.y();
      }
      out << "\n";
    }
  }
}

}  // namespace serpnav
