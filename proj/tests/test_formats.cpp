#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "serpnav/config.hpp"
#include "serpnav/io.hpp"
#include "serpnav/svg.hpp"

using namespace serpnav;

namespace {

std::string tempPath(const char* name) {
  return std::string("/tmp/serpnav_test_") + name;
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("sweep CSV: header, row count, 9 significant digits") {
  SweepResult sweep;
  sweep.grid.push_back({0.005, -2.0, {0.0123456789123, -1.5e-05, 0.0485159035}});
  sweep.grid.push_back({0.005, 2.0, {0.0123456789123, 1.5e-05, -0.0485159035}});
  std::stringstream out;
  writeSweepCsv(sweep, out);
  std::string line;
  std::getline(out, line);
  CHECK(line == "A,kappa,xi_x,xi_y,omega");
  std::getline(out, line);
  CHECK(line == "0.005,-2,0.0123456789,-1.5e-05,0.0485159035");
}

TEST_CASE("reduction map record round trip") {
  ReductionMap map;
  map.v_forward = 0.024638183037529394;
  map.omega_slope = -0.024245391089865436;
  map.omega_intercept = -4.997494388800372e-20;
  map.fit_r_squared = 0.9999996143608143;
  const std::string path = tempPath("reduction.txt");
  writeReductionMap(map, path);
  const ReductionMap back = loadReductionMap(path);
  CHECK(back.v_forward == map.v_forward);
  CHECK(back.omega_slope == map.omega_slope);
  CHECK(back.omega_intercept == map.omega_intercept);
  CHECK(back.fit_r_squared == map.fit_r_squared);
  std::remove(path.c_str());

  std::stringstream missing("v_forward: 0.02\nomega_slope: -0.02\n");
  CHECK_THROWS(parseReductionMap(missing));
  std::stringstream zero_slope(
      "v_forward: 0.02\nomega_slope: 0\nomega_intercept: 0\nfit_r_squared: 1\n");
  CHECK_THROWS(parseReductionMap(zero_slope));
}

TEST_CASE("episode CSV: exact column set") {
  EpisodeLog log;
  CycleRecord r;
  r.cycle = 0;
  r.true_pose = {0.4, 1.2, 0.0};
  r.est_pose = {0.4, 1.2, 0.0};
  r.kappa_cmd = 1.25;
  r.traj_id = 2;
  log.records.push_back(r);
  std::stringstream out;
  writeEpisodeCsv(log, out);
  std::string header;
  std::getline(out, header);
  CHECK(header ==
        "cycle,x_true,y_true,theta_true,x_est,y_est,theta_est,kappa_cmd,"
        "omega_ff,omega_fb,traj_id,collision");
  std::string row;
  std::getline(out, row);
  int commas = 0;
  for (char c : row) commas += c == ',';
  CHECK(commas == 11);
}

TEST_CASE("SVG outputs are well-formed") {
  Scene scene;
  scene.bounds = {{0, 0}, {2, 1}};
  scene.start = {0.2, 0.5, 0};
  scene.goal = {{1.8, 0.5}, 0.1};
  scene.obstacles.push_back(Disc{{1.0, 0.5}, 0.1});
  scene.obstacles.push_back(ConvexPolygon{{{0.5, 0.2}, {0.7, 0.2}, {0.7, 0.4}}});

  EpisodeLog log;
  for (int i = 0; i < 5; ++i) {
    CycleRecord r;
    r.cycle = i;
    r.true_pose = {0.2 + 0.1 * i, 0.5, 0.0};
    r.est_pose = r.true_pose;
    r.kappa_cmd = 0.2 * i;
    log.records.push_back(r);
  }
  ReductionMap map;
  map.v_forward = 0.014;
  map.omega_slope = -0.0136;

  for (const char* name : {"traj.svg", "curv.svg"}) {
    const std::string path = tempPath(name);
    if (std::string(name) == "traj.svg") {
      writeTrajectorySvg(scene, log, path);
    } else {
      writeCurvatureSvg(log, map, 2.0, path);
    }
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    const std::string svg = content.str();
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    // Every element is either self-closing or closed.
    size_t opens = 0, closes = 0;
    for (size_t i = 0; i + 1 < svg.size(); ++i) {
      if (svg[i] == '<' && svg[i + 1] != '/' && svg[i + 1] != '?') ++opens;
      if (svg[i] == '/' && (svg[i + 1] == '>' )) ++closes;
      if (svg[i] == '<' && svg[i + 1] == '/') ++closes;
    }
    CHECK(opens == closes);
    std::remove(path.c_str());
  }
}

TEST_CASE("scenario config: defaults, overrides, and rejection") {
  const std::string path = tempPath("config.cfg");
  writeFile(path,
            "format: 1\n"
            "# comment line\n"
            "seed: 42\n"
            "mode: high_fidelity\n"
            "gait.wavelength: 0.1\n"
            "planner.kappa_max: 3.5\n"
            "controller.k_cross: 6.5\n"
            "localization.noise_enabled: false\n"
            "sweep.kappa: -1 0 1\n");
  const ScenarioConfig config = loadScenarioConfig(path);
  CHECK(config.episode.seed == 42);
  CHECK(config.episode.mode == SimMode::kHighFidelity);
  CHECK(config.episode.gait.wavelength == doctest::Approx(0.1));
  CHECK(config.episode.kappa_max == doctest::Approx(3.5));
  CHECK(config.episode.tracking.k_cross == doctest::Approx(6.5));
  CHECK_FALSE(config.episode.odometry_noise_enabled);
  REQUIRE(config.sweep_kappas.size() == 3);
  // Untouched defaults survive.
  CHECK(config.episode.tracking.waypoint_radius == doctest::Approx(0.06));
  CHECK(config.episode.tracking.replan_cycles == 4);
  CHECK(config.episode.footprint_width == doctest::Approx(0.051));
  std::remove(path.c_str());

  writeFile(path, "format: 2\n");
  CHECK_THROWS(loadScenarioConfig(path));
  writeFile(path, "format: 1\nnot.a.key: 3\n");
  CHECK_THROWS(loadScenarioConfig(path));
  writeFile(path, "format: 1\nseed: 1 2\n");
  CHECK_THROWS(loadScenarioConfig(path));
  writeFile(path, "format: 1\ngait.frequency: fast\n");
  CHECK_THROWS(loadScenarioConfig(path));
  writeFile(path, "seed: 1\n");
  CHECK_THROWS(loadScenarioConfig(path));  // missing format line
  std::remove(path.c_str());
}

TEST_CASE("scenario config: inline reduction map") {
  const std::string path = tempPath("config_map.cfg");
  writeFile(path,
            "format: 1\n"
            "reduction.v_forward: 0.014\n"
            "reduction.omega_slope: -0.0136\n"
            "reduction.omega_intercept: 0\n"
            "reduction.fit_r_squared: 0.999\n");
  const ScenarioConfig config = loadScenarioConfig(path);
  CHECK(config.has_explicit_map);
  const ReductionMap map = resolveReductionMap(config);
  CHECK(map.v_forward == doctest::Approx(0.014));
  CHECK(map.omega_slope == doctest::Approx(-0.0136));
  std::remove(path.c_str());
}
