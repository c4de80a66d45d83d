#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "serpnav/gait.hpp"

using namespace serpnav;

namespace {

// Coarser integration settings keep single-point unit tests fast; sweeps and
// acceptance use the full defaults.
GaitSimOptions fastOpts() {
  GaitSimOptions opts;
  opts.samples_per_link = 8;
  opts.dt = 1.0 / (400.0 * GaitParams{}.frequency);
  return opts;
}

}  // namespace

TEST_CASE("bodyCurvePoint: trivial values") {
  const Eigen::Vector2d origin = bodyCurvePoint(0.0, 2.0);
  CHECK(origin.x() == doctest::Approx(0.0));
  CHECK(origin.y() == doctest::Approx(0.0));

  const Eigen::Vector2d straight = bodyCurvePoint(0.3, 1e-12);
  CHECK(straight.x() == doctest::Approx(0.3));
  CHECK(straight.y() == doctest::Approx(0.0));
}

TEST_CASE("bodyCurvePoint matches a long-double evaluation") {
  // Independent oracle: the same closed form evaluated in extended precision.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s_dist(-0.36, 0.36);
  std::uniform_real_distribution<double> k_dist(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const double s = s_dist(rng);
    double kappa = k_dist(rng);
    if (std::abs(kappa) < 1e-6) kappa = 1.5;
    const Eigen::Vector2d p = bodyCurvePoint(s, kappa);
    const long double sl = s, kl = kappa;
    const long double x = sinl(kl * sl) / kl;
    const long double y = (cosl(kl * sl) - 1.0L) / kl;
    CHECK(std::abs(p.x() - static_cast<double>(x)) < 1e-14);
    CHECK(std::abs(p.y() - static_cast<double>(y)) < 1e-14);
  }
  // Spot value frozen from the oracle at (s=0.3, kappa=1.5).
  const Eigen::Vector2d spot = bodyCurvePoint(0.3, 1.5);
  CHECK(spot.x() == doctest::Approx(0.28997702274082014).epsilon(1e-13));
  CHECK(spot.y() == doctest::Approx(-0.06636859843154872).epsilon(1e-13));
}

TEST_CASE("bodyCurvePoint: small-kappa branch agrees with the formula") {
  const double s = 0.3;
  for (double kappa : {2e-9, -2e-9, 1e-8}) {
    const Eigen::Vector2d exact = bodyCurvePoint(s, kappa);
    const long double x = sinl((long double)kappa * s) / (long double)kappa;
    CHECK(std::abs(exact.x() - static_cast<double>(x)) < 1e-12);
  }
  // Below the branch threshold the limit (s, 0) is returned.
  const Eigen::Vector2d limit = bodyCurvePoint(s, 1e-10);
  CHECK(limit.x() == doctest::Approx(s));
  CHECK(limit.y() == 0.0);
}

TEST_CASE("liftHeight: zeros, peak, periodicity") {
  GaitParams p;
  CHECK(liftHeight(0.0, 0.0, p) == doctest::Approx(0.0));
  CHECK(liftHeight(p.wavelength / 4.0, 0.0, p) == doctest::Approx(p.amplitude));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> s_dist(-0.36, 0.36);
  std::uniform_real_distribution<double> t_dist(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double s = s_dist(rng), t = t_dist(rng);
    CHECK(std::abs(liftHeight(s, t, p)) <= p.amplitude + 1e-15);
    CHECK(liftHeight(s, t + 1.0 / p.frequency, p) ==
          doctest::Approx(liftHeight(s, t, p)).epsilon(1e-9));
  }
}

TEST_CASE("contactProfile: whole body for A=0 or threshold >= A") {
  GaitParams p;
  p.amplitude = 0.0;
  const ContactProfile all = contactProfile(0.3, p, 0.0);
  REQUIRE(all.intervals.size() == 1);
  CHECK(all.intervals[0].first == doctest::Approx(-0.36));
  CHECK(all.intervals[0].second == doctest::Approx(0.36));

  p.amplitude = 0.01;
  const ContactProfile full = contactProfile(0.0, p, 0.02);
  REQUIRE(full.intervals.size() == 1);
  CHECK(full.intervals[0].first == doctest::Approx(-0.36));
}

TEST_CASE("contactProfile: zero threshold gives zero-measure intervals at wave zeros") {
  GaitParams p;
  p.amplitude = 0.01;
  p.wavelength = p.body_length / 2.0;
  const ContactProfile profile = contactProfile(0.0, p, 0.0);
  CHECK(profile.intervals.size() >= 4);
  for (const auto& [s1, s2] : profile.intervals) {
    CHECK(s2 - s1 < 1e-12);
    CHECK(std::abs(std::sin(2.0 * M_PI * s1 / p.wavelength)) < 1e-9);
  }
}

TEST_CASE("contactProfile matches dense sampling of the lift wave") {
  GaitParams p;
  p.amplitude = 0.01;
  p.wavelength = p.body_length / 2.0;
  const double threshold = 0.001;
  for (double t : {0.0, 0.31, 1.07}) {
    const ContactProfile profile = contactProfile(t, p, threshold);
    const auto inside = [&](double s) {
      for (const auto& [s1, s2] : profile.intervals) {
        if (s >= s1 - 1e-12 && s <= s2 + 1e-12) return true;
      }
      return false;
    };
    // 10^4-point dense-sampling oracle.
    for (int i = 0; i <= 10000; ++i) {
      const double s = -0.36 + 0.72 * i / 10000.0;
      const bool in_contact = std::abs(liftHeight(s, t, p)) <= threshold;
      // Skip samples within float noise of an interval edge.
      bool near_edge = false;
      for (const auto& [s1, s2] : profile.intervals) {
        if (std::abs(s - s1) < 1e-7 || std::abs(s - s2) < 1e-7) near_edge = true;
      }
      if (!near_edge) CHECK(inside(s) == in_contact);
    }
  }
}

TEST_CASE("activation pulses") {
  GaitParams p;
  const ActivationProfile profile = makeActivationProfile(p, 0.008);
  REQUIRE(static_cast<int>(profile.pulse_centers.size()) == p.link_count - 1);
  CHECK(activation(profile.pulse_centers[3], profile) == 1);
  const double mid = 0.5 * (profile.pulse_centers[3] + profile.pulse_centers[4]);
  CHECK(activation(mid, profile) == 0);

  // Closed-boundary convention, checked on exactly representable values.
  ActivationProfile dyadic;
  dyadic.pulse_width = 0.25;
  dyadic.pulse_centers = {0.5};
  CHECK(activation(0.625, dyadic) == 1);   // s = center + width/2 exactly
  CHECK(activation(0.375, dyadic) == 1);
  CHECK(activation(0.6250001, dyadic) == 0);
}

TEST_CASE("stepDynamics rejects out-of-range dt") {
  GaitParams p;
  FrictionCoefficients fr;
  GaitState state = makeGaitState(p);
  CHECK_THROWS_AS(stepDynamics(state, p, fr, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(stepDynamics(state, p, fr, 1.0 / (40.0 * p.frequency)),
                  std::invalid_argument);
}

TEST_CASE("stepDynamics: no wave, no motion") {
  GaitParams p;
  p.amplitude = 0.0;
  FrictionCoefficients fr;
  const GaitSimOptions opts = fastOpts();
  GaitState state = makeGaitState(p, opts);
  for (int i = 0; i < 500; ++i) stepDynamics(state, p, fr, opts.dt, opts);
  CHECK(state.pose.x == 0.0);
  CHECK(state.pose.y == 0.0);
  CHECK(state.pose.theta == 0.0);
}

TEST_CASE("stepDynamics: straight gait stays on the x-axis") {
  GaitParams p;  // kappa = 0
  FrictionCoefficients fr;
  const GaitSimOptions opts = fastOpts();
  GaitState state = makeGaitState(p, opts);
  const int steps = static_cast<int>(std::round(p.cyclePeriod() / opts.dt));
  for (int i = 0; i < steps; ++i) stepDynamics(state, p, fr, opts.dt, opts);
  CHECK(state.pose.x > 0.0);
  CHECK(std::abs(state.pose.y) / std::abs(state.pose.x) < 1e-6);
}

TEST_CASE("stepDynamics: step halving changes the cycle displacement < 1%") {
  GaitParams p;
  FrictionCoefficients fr;
  GaitSimOptions opts;
  opts.dt = 1.0 / (800.0 * p.frequency);
  const auto run_cycle = [&](double dt) {
    GaitState state = makeGaitState(p, opts);
    const int steps = static_cast<int>(std::round(p.cyclePeriod() / dt));
    for (int i = 0; i < steps; ++i) stepDynamics(state, p, fr, dt, opts);
    return state.pose;
  };
  const Pose2d coarse = run_cycle(opts.dt);
  const Pose2d fine = run_cycle(opts.dt / 2.0);
  CHECK(std::abs(coarse.x - fine.x) / std::abs(fine.x) < 0.01);
}

TEST_CASE("averageBodyVelocity: symmetry at kappa = 0") {
  GaitParams p;
  const BodyVelocity v = averageBodyVelocity(p, {}, 2, 4, fastOpts());
  CHECK(std::abs(v.omega) <= 1e-3);
  CHECK(v.xi_x > 0.0);
}

TEST_CASE("averageBodyVelocity: mirror antisymmetry in kappa") {
  GaitParams p;
  const GaitSimOptions opts = fastOpts();
  p.curvature = 1.0;
  const BodyVelocity pos = averageBodyVelocity(p, {}, 2, 4, opts);
  p.curvature = -1.0;
  const BodyVelocity neg = averageBodyVelocity(p, {}, 2, 4, opts);
  CHECK(std::abs(pos.omega + neg.omega) <= 0.02 * std::abs(pos.omega));
  CHECK(pos.xi_x == doctest::Approx(neg.xi_x).epsilon(1e-9));
}

TEST_CASE("averageBodyVelocity: frozen fine-step regression anchor") {
  // Recorded from a dt/4 (3200 steps/cycle) long-horizon run at defaults:
  //   xi_x = 0.024602440607, xi_y = 2.838957655e-05, omega = -0.012104363865
  GaitParams p;
  p.curvature = 0.5;
  const BodyVelocity v = averageBodyVelocity(p, {}, 4, 8);
  CHECK(v.xi_x == doctest::Approx(0.024602440607).epsilon(1e-3));
  CHECK(v.omega == doctest::Approx(-0.012104363865).epsilon(1e-3));
  CHECK(std::abs(v.xi_y - 2.838957655e-05) < 1e-6);
}

TEST_CASE("sweepParameters: 1x1 grid equals a direct call") {
  GaitParams p;
  const GaitSimOptions opts = fastOpts();
  const SweepResult sweep = sweepParameters({0.01}, {0.0}, p, {}, 2, 4, opts);
  REQUIRE(sweep.grid.size() == 1);
  p.amplitude = 0.01;
  p.curvature = 0.0;
  const BodyVelocity direct = averageBodyVelocity(p, {}, 2, 4, opts);
  CHECK(std::memcmp(&sweep.grid[0].velocity, &direct, sizeof(direct)) == 0);
}

TEST_CASE("sweepParameters: grid entries are bit-identical to direct calls") {
  GaitParams base;
  const GaitSimOptions opts = fastOpts();
  const std::vector<double> amplitudes{0.005, 0.01, 0.015};
  const std::vector<double> kappas{-1.0, -0.5, 0.0, 0.5, 1.0};
  const SweepResult sweep =
      sweepParameters(amplitudes, kappas, base, {}, 2, 2, opts, 2);
  REQUIRE(sweep.grid.size() == 15);
  for (size_t ai = 0; ai < amplitudes.size(); ++ai) {
    for (size_t ki = 0; ki < kappas.size(); ++ki) {
      GaitParams p = base;
      p.amplitude = amplitudes[ai];
      p.curvature = kappas[ki];
      const BodyVelocity direct = averageBodyVelocity(p, {}, 2, 2, opts);
      const BodyVelocity& entry = sweep.grid[ai * kappas.size() + ki].velocity;
      CHECK(std::memcmp(&entry, &direct, sizeof(direct)) == 0);
    }
  }
}

TEST_CASE("sweepParameters rejects an asymmetric kappa grid") {
  CHECK_THROWS_AS(sweepParameters({0.01}, {0.0, 0.5}, {}, {}, 1, 1, fastOpts()),
                  std::invalid_argument);
}

TEST_CASE("fitReduction: exact linear input") {
  SweepResult sweep;
  sweep.kappas = {-1.0, 0.0, 1.0};
  for (double kappa : sweep.kappas) {
    sweep.grid.push_back({0.01, kappa, {0.02, 0.0, 0.8 * kappa}});
  }
  const ReductionMap map = fitReduction(sweep);
  CHECK(map.omega_slope == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(map.omega_intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(map.v_forward == doctest::Approx(0.02));
  CHECK(map.fit_r_squared == doctest::Approx(1.0));
}

TEST_CASE("fitReduction matches the closed-form least-squares oracle") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> noise(0.0, 1e-3);
  SweepResult sweep;
  for (double kappa : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    for (double amp : {0.005, 0.02}) {
      sweep.grid.push_back({amp, kappa, {0.02, 0.0, 0.8 * kappa + noise(rng)}});
    }
  }
  const ReductionMap map = fitReduction(sweep);

  // Independent closed form over the pooled (kappa, omega) pairs.
  double sk = 0, sw = 0, skk = 0, skw = 0;
  const double n = sweep.grid.size();
  for (const SweepPoint& p : sweep.grid) {
    sk += p.kappa;
    sw += p.velocity.omega;
    skk += p.kappa * p.kappa;
    skw += p.kappa * p.velocity.omega;
  }
  const double slope = (n * skw - sk * sw) / (n * skk - sk * sk);
  const double intercept = (sw - slope * sk) / n;
  CHECK(std::abs(map.omega_slope - slope) < 1e-12);
  CHECK(std::abs(map.omega_intercept - intercept) < 1e-12);
}

TEST_CASE("fitReduction: single-A and multi-A sweeps agree for A-invariant input") {
  SweepResult single, multi;
  for (double kappa : {-1.5, -0.5, 0.5, 1.5}) {
    single.grid.push_back({0.01, kappa, {0.02, 0.0, 0.8 * kappa}});
    for (double amp : {0.005, 0.01, 0.02}) {
      multi.grid.push_back({amp, kappa, {0.02, 0.0, 0.8 * kappa}});
    }
  }
  CHECK(fitReduction(single).omega_slope ==
        doctest::Approx(fitReduction(multi).omega_slope).epsilon(1e-12));
}

TEST_CASE("fitReduction rejects degenerate inputs") {
  SweepResult degenerate;
  for (int i = 0; i < 5; ++i) degenerate.grid.push_back({0.01, 1.0, {0.02, 0, 0.8}});
  CHECK_THROWS_AS(fitReduction(degenerate), std::invalid_argument);
  SweepResult tiny;
  tiny.grid.push_back({0.01, 0.0, {0.02, 0, 0}});
  CHECK_THROWS_AS(fitReduction(tiny), std::invalid_argument);
}

TEST_CASE("kappaOfOmega: inverse and saturation") {
  ReductionMap map;
  map.v_forward = 0.02;
  map.omega_slope = -0.024;
  map.omega_intercept = 1e-4;

  CHECK(kappaOfOmega(map, map.omega_intercept, 2.0).kappa == doctest::Approx(0.0));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> omega_dist(-0.04, 0.04);
  for (int i = 0; i < 200; ++i) {
    const double omega = omega_dist(rng);
    const KappaCommand cmd = kappaOfOmega(map, omega, 1e9);
    CHECK(std::abs(map.forwardOmega(cmd.kappa) - omega) < 1e-12);
    CHECK_FALSE(cmd.saturated);
  }

  const KappaCommand clamped = kappaOfOmega(map, map.forwardOmega(3.0), 2.0);
  CHECK(clamped.kappa == doctest::Approx(2.0));
  CHECK(clamped.saturated);

  ReductionMap flat = map;
  flat.omega_slope = 0.0;
  CHECK_THROWS_AS(kappaOfOmega(flat, 0.0, 2.0), std::invalid_argument);
}

TEST_CASE("GaitParams and FrictionCoefficients validation") {
  GaitParams p;
  p.curvature = 9.0;  // |kappa| * L exceeds 2 pi
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.link_count = 1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  FrictionCoefficients fr{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(fr.validate(), std::invalid_argument);
}
