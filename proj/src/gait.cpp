#include "serpnav/gait.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace serpnav {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double smoothstep01(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

// Sampled body geometry in the body frame, fixed for a given curvature.
struct SampleGeometry {
  double s;                 // arclength
  Eigen::Vector2d position;
  Eigen::Vector2d tangent;
  double weight;            // represented length, m
  double activation;        // smoothed pulse value in [0, 1]
  double wave_phase;        // 2 pi s / lambda
};

struct SimContext {
  std::vector<SampleGeometry> samples;
  double mass{0};
  double inertia{0};
  GaitParams params;
  FrictionCoefficients friction;
  GaitSimOptions opts;
};

// Smoothed activation pulse: 1 well inside the pulse, 0 well outside, with
// smoothstep edges 20% of the pulse width wide.
double smoothActivation(double s, const ActivationProfile& profile) {
  const double half = profile.pulse_width / 2.0;
  const double edge = 0.2 * profile.pulse_width;
  double best = 0.0;
  for (double c : profile.pulse_centers) {
    const double d = std::abs(s - c);
    best = std::max(best, smoothstep01((half + edge / 2.0 - d) / edge));
  }
  return best;
}

// Smoothed contact weight as a function of u = |z| / threshold.
double contactWeight(double u) {
  return smoothstep01((1.2 - u) / 0.4);
}

SimContext buildContext(const GaitParams& params,
                        const FrictionCoefficients& friction,
                        const GaitSimOptions& opts) {
  params.validate();
  friction.validate();

  SimContext ctx;
  ctx.params = params;
  ctx.friction = friction;
  ctx.opts = opts;

  const int n = params.link_count;
  const double half = params.body_length / 2.0;
  const double link_len = params.body_length / n;
  const double kappa = params.curvature;

  // Joint endpoints of the polyline; link j spans [s_j, s_{j+1}] and points
  // along the average-curve tangent at its center, angle -kappa * s.
  std::vector<double> angles(n);
  for (int j = 0; j < n; ++j) {
    const double s_center = -half + (j + 0.5) * link_len;
    angles[j] = -kappa * s_center;
  }
  std::vector<Eigen::Vector2d> joints(n + 1);
  joints[0] = Eigen::Vector2d::Zero();
  for (int j = 0; j < n; ++j) {
    joints[j + 1] =
        joints[j] + link_len * Eigen::Vector2d(std::cos(angles[j]), std::sin(angles[j]));
  }
  // Shift so that the body-frame origin sits at arclength 0.
  const int mid_link = std::min(n - 1, n / 2);
  const double s_mid_start = -half + mid_link * link_len;
  const Eigen::Vector2d origin =
      joints[mid_link] + (0.0 - s_mid_start) *
                             Eigen::Vector2d(std::cos(angles[mid_link]),
                                             std::sin(angles[mid_link]));
  for (auto& p : joints) p -= origin;

  const ActivationProfile act = makeActivationProfile(params, opts.pulse_width);

  const int m = std::max(1, opts.samples_per_link);
  ctx.samples.reserve(static_cast<size_t>(n) * m);
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector2d dir(std::cos(angles[j]), std::sin(angles[j]));
    const double s_start = -half + j * link_len;
    for (int i = 0; i < m; ++i) {
      SampleGeometry g;
      g.s = s_start + (i + 0.5) * link_len / m;
      g.position = joints[j] + (g.s - s_start) * dir;
      g.tangent = dir;
      g.weight = link_len / m;
      g.activation = smoothActivation(g.s, act);
      g.wave_phase = kTwoPi * g.s / params.wavelength;
      ctx.samples.push_back(g);
    }
    ctx.mass += opts.link_mass;
    const Eigen::Vector2d center = 0.5 * (joints[j] + joints[j + 1]);
    ctx.inertia += opts.link_mass * (center.squaredNorm() + link_len * link_len / 12.0);
  }
  return ctx;
}

// Net body-frame force and torque from per-contact viscous friction.
//
// At activated contacts the surface rolls backward at the wave pattern speed
// (lambda * f); the resulting backward slip is resisted by mu_b and reacts as
// forward thrust. Elsewhere contact is plain drag (mu_f forward / mu_b
// backward along the link tangent). Transverse slip is resisted by mu_t at
// every contact.
Eigen::Vector3d contactForces(const SimContext& ctx, double t,
                              const Eigen::Vector3d& xi) {
  const GaitParams& p = ctx.params;
  const bool waving = p.amplitude > 0.0;
  const double tread_speed = waving ? p.wavelength * p.frequency : 0.0;
  const double time_phase = kTwoPi * p.frequency * t;
  const double factor = ctx.opts.contact_threshold_factor;
  const double scale = ctx.opts.contact_damping;
  const double mu_f = ctx.friction.mu_f;
  const double mu_b = ctx.friction.mu_b;
  const double mu_t = ctx.friction.mu_t;

  double fx = 0.0, fy = 0.0, tau = 0.0;
  for (const SampleGeometry& g : ctx.samples) {
    double w = 1.0;
    if (waving) {
      const double u = std::abs(std::sin(time_phase + g.wave_phase)) / factor;
      w = contactWeight(u);
      if (w <= 0.0) continue;
    }
    const Eigen::Vector2d v_pt(xi.x() - xi.z() * g.position.y(),
                               xi.y() + xi.z() * g.position.x());
    const Eigen::Vector2d normal(-g.tangent.y(), g.tangent.x());
    const double v_t = v_pt.dot(g.tangent) - g.activation * tread_speed;
    const double v_n = v_pt.dot(normal);
    // Direction-dependent tangential coefficient, smoothly blended at v_t = 0.
    const double sig = 0.5 * (1.0 + std::tanh(v_t / 1e-4));
    const double mu_tan = mu_f * sig + mu_b * (1.0 - sig);
    const double c = scale * w * g.weight;
    const double f_t = -mu_tan * v_t * c;
    const double f_n = -mu_t * v_n * c;
    const Eigen::Vector2d f = f_t * g.tangent + f_n * normal;
    fx += f.x();
    fy += f.y();
    tau += g.position.x() * f.y() - g.position.y() * f.x();
  }
  return {fx, fy, tau};
}

using State6 = Eigen::Matrix<double, 6, 1>;  // x, y, theta, xi_x, xi_y, omega

State6 derivative(const SimContext& ctx, double t, const State6& y) {
  const Eigen::Vector3d xi = y.tail<3>();
  const Eigen::Vector3d f = contactForces(ctx, t, xi);
  const double c = std::cos(y[2]), s = std::sin(y[2]);
  State6 dy;
  dy[0] = c * xi.x() - s * xi.y();
  dy[1] = s * xi.x() + c * xi.y();
  dy[2] = xi.z();
  dy[3] = f.x() / ctx.mass + xi.z() * xi.y();
  dy[4] = f.y() / ctx.mass - xi.z() * xi.x();
  dy[5] = f.z() / ctx.inertia;
  return dy;
}

void rk4Step(const SimContext& ctx, State6& y, double& t, double dt) {
  const State6 k1 = derivative(ctx, t, y);
  const State6 k2 = derivative(ctx, t + dt / 2.0, y + dt / 2.0 * k1);
  const State6 k3 = derivative(ctx, t + dt / 2.0, y + dt / 2.0 * k2);
  const State6 k4 = derivative(ctx, t + dt, y + dt * k3);
  y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  t += dt;
}

State6 packState(const GaitState& state) {
  State6 y;
  y << state.pose.x, state.pose.y, state.pose.theta, state.body_velocity;
  return y;
}

void unpackState(const State6& y, double t, const GaitParams& params,
                 GaitState& state) {
  state.pose = {y[0], y[1], normalizeAngle(y[2])};
  state.body_velocity = y.tail<3>();
  state.time = t;
  const int n = params.link_count;
  const double half = params.body_length / 2.0;
  const double link_len = params.body_length / n;
  for (int j = 1; j < n; ++j) {
    state.chain.joint_heights[j - 1] = liftHeight(-half + j * link_len, t, params);
  }
}

void checkDt(const GaitParams& params, double dt) {
  const double dt_max = 1.0 / (50.0 * params.frequency);
  if (!(dt > 0.0) || dt > dt_max * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "integrator step must satisfy 0 < dt <= 1/(50 f)");
  }
}

}  // namespace

void GaitParams::validate() const {
  if (!(amplitude >= 0.0)) throw std::invalid_argument("amplitude must be >= 0");
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be > 0");
  if (!(frequency > 0.0)) throw std::invalid_argument("frequency must be > 0");
  if (!(body_length > 0.0)) throw std::invalid_argument("body_length must be > 0");
  if (link_count < 2) throw std::invalid_argument("link_count must be >= 2");
  if (!(std::abs(curvature) * body_length < kTwoPi)) {
    throw std::invalid_argument("|kappa| * L must stay below 2 pi");
  }
}

void FrictionCoefficients::validate() const {
  if (!(mu_f >= 0.0) || !(mu_b >= 0.0) || !(mu_t >= 0.0)) {
    throw std::invalid_argument("friction coefficients must be non-negative");
  }
  if (mu_f == 0.0 && mu_b == 0.0 && mu_t == 0.0) {
    throw std::invalid_argument("at least one friction coefficient must be positive");
  }
}

double liftHeight(double s, double t, const GaitParams& params) {
  return params.amplitude *
         std::sin(kTwoPi * (params.frequency * t + s / params.wavelength));
}

ContactProfile contactProfile(double t, const GaitParams& params, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
  params.validate();

  const double half = params.body_length / 2.0;
  if (params.amplitude == 0.0 || threshold >= params.amplitude) {
    return {{{-half, half}}};
  }

  // |A sin(theta)| <= threshold on theta in [k pi - d, k pi + d], d = asin(q).
  const double q = threshold / params.amplitude;
  const double d = std::asin(q);
  const double lambda = params.wavelength;
  const double ft = params.frequency * t;
  const auto theta_of_s = [&](double s) { return kTwoPi * (ft + s / lambda); };
  const auto s_of_theta = [&](double theta) {
    return (theta / kTwoPi - ft) * lambda;
  };

  const double theta_lo = theta_of_s(-half);
  const double theta_hi = theta_of_s(half);
  const int k_lo = static_cast<int>(std::floor(theta_lo / M_PI)) - 1;
  const int k_hi = static_cast<int>(std::ceil(theta_hi / M_PI)) + 1;

  ContactProfile profile;
  for (int k = k_lo; k <= k_hi; ++k) {
    double s1 = std::max(s_of_theta(k * M_PI - d), -half);
    double s2 = std::min(s_of_theta(k * M_PI + d), half);
    if (s2 < s1) continue;
    profile.intervals.emplace_back(s1, s2);
  }
  return profile;
}

ActivationProfile makeActivationProfile(const GaitParams& params, double pulse_width) {
  const double half = params.body_length / 2.0;
  const double link_len = params.body_length / params.link_count;
  ActivationProfile profile;
  profile.pulse_width = pulse_width;
  for (int j = 1; j < params.link_count; ++j) {
    profile.pulse_centers.push_back(-half + j * link_len);
  }
  return profile;
}

int activation(double s, const ActivationProfile& profile) {
  const double half = profile.pulse_width / 2.0;
  for (double c : profile.pulse_centers) {
    if (std::abs(s - c) <= half) return 1;
  }
  return 0;
}

GaitState makeGaitState(const GaitParams& params, const GaitSimOptions& opts) {
  params.validate();
  GaitState state;
  const int n = params.link_count;
  state.chain.link_masses = Eigen::VectorXd::Constant(n, opts.link_mass);
  state.chain.link_lengths = Eigen::VectorXd::Constant(n, params.body_length / n);
  state.chain.joint_angles = Eigen::VectorXd::Constant(
      n - 1, -params.curvature * params.body_length / n);
  state.chain.joint_heights = Eigen::VectorXd::Zero(n - 1);
  const double half = params.body_length / 2.0;
  const double link_len = params.body_length / n;
  for (int j = 1; j < n; ++j) {
    state.chain.joint_heights[j - 1] = liftHeight(-half + j * link_len, 0.0, params);
  }
  return state;
}

void stepDynamics(GaitState& state, const GaitParams& params,
                  const FrictionCoefficients& friction, double dt,
                  const GaitSimOptions& opts) {
  checkDt(params, dt);
  const SimContext ctx = buildContext(params, friction, opts);
  State6 y = packState(state);
  double t = state.time;
  rk4Step(ctx, y, t, dt);
  unpackState(y, t, params, state);
}

void integrateGait(GaitState& state, const GaitParams& params,
                   const FrictionCoefficients& friction, double duration,
                   const GaitSimOptions& opts) {
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
  const double dt_req = opts.effectiveDt(params);
  checkDt(params, dt_req);
  const int steps = std::max(1, static_cast<int>(std::ceil(duration / dt_req - 1e-9)));
  const double dt = duration / steps;
  const SimContext ctx = buildContext(params, friction, opts);
  State6 y = packState(state);
  double t = state.time;
  for (int i = 0; i < steps; ++i) rk4Step(ctx, y, t, dt);
  unpackState(y, t, params, state);
}

BodyVelocity averageBodyVelocity(const GaitParams& params,
                                 const FrictionCoefficients& friction,
                                 int settle_cycles, int average_cycles,
                                 const GaitSimOptions& opts) {
  if (settle_cycles < 1 || average_cycles < 1) {
    throw std::invalid_argument("settle and average cycle counts must be >= 1");
  }
  const double period = params.cyclePeriod();
  const double dt_req = opts.effectiveDt(params);
  checkDt(params, dt_req);
  const int steps = std::max(50, static_cast<int>(std::ceil(period / dt_req - 1e-9)));
  const double dt = period / steps;

  const SimContext ctx = buildContext(params, friction, opts);
  GaitState state = makeGaitState(params, opts);
  State6 y = packState(state);
  double t = 0.0;

  for (int c = 0; c < settle_cycles; ++c) {
    for (int i = 0; i < steps; ++i) rk4Step(ctx, y, t, dt);
  }

  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (int c = 0; c < average_cycles; ++c) {
    const Pose2d start{y[0], y[1], normalizeAngle(y[2])};
    for (int i = 0; i < steps; ++i) rk4Step(ctx, y, t, dt);
    const Pose2d end{y[0], y[1], normalizeAngle(y[2])};
    sum += logTwist(between(start, end)) / period;
  }
  sum /= average_cycles;
  return {sum.x(), sum.y(), sum.z()};
}

SweepResult sweepParameters(const std::vector<double>& amplitudes,
                            const std::vector<double>& kappas,
                            const GaitParams& base_params,
                            const FrictionCoefficients& friction,
                            int settle_cycles, int average_cycles,
                            const GaitSimOptions& opts, int threads) {
  if (amplitudes.empty() || kappas.empty()) {
    throw std::invalid_argument("sweep grids must be non-empty");
  }
  for (double k : kappas) {
    const bool has_mirror =
        std::any_of(kappas.begin(), kappas.end(),
                    [&](double other) { return std::abs(other + k) < 1e-12; });
    if (!has_mirror) {
      throw std::invalid_argument("kappa grid must be symmetric about 0");
    }
  }

  SweepResult result;
  result.amplitudes = amplitudes;
  result.kappas = kappas;
  result.settle_cycles = settle_cycles;
  result.cycles_averaged = average_cycles;
  result.grid.resize(amplitudes.size() * kappas.size());

  const auto evaluate = [&](size_t index) {
    const size_t ai = index / kappas.size();
    const size_t ki = index % kappas.size();
    GaitParams p = base_params;
    p.amplitude = amplitudes[ai];
    p.curvature = kappas[ki];
    SweepPoint point;
    point.amplitude = p.amplitude;
    point.kappa = p.curvature;
    point.velocity =
        averageBodyVelocity(p, friction, settle_cycles, average_cycles, opts);
    result.grid[index] = point;
  };

  const size_t total = result.grid.size();
  const int workers =
      std::clamp<int>(threads, 1, static_cast<int>(total));
  if (workers <= 1) {
    for (size_t i = 0; i < total; ++i) evaluate(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
          evaluate(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return result;
}

ReductionMap fitReduction(const SweepResult& sweep) {
  const size_t n = sweep.grid.size();
  if (n < 3) throw std::invalid_argument("sweep too small to fit");

  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd omega(n);
  double xi_sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    design(i, 0) = sweep.grid[i].kappa;
    design(i, 1) = 1.0;
    omega(i) = sweep.grid[i].velocity.omega;
    xi_sum += sweep.grid[i].velocity.xi_x;
  }

  std::vector<double> distinct;
  for (size_t i = 0; i < n; ++i) {
    const double k = design(i, 0);
    if (std::none_of(distinct.begin(), distinct.end(),
                     [&](double d) { return std::abs(d - k) < 1e-12; })) {
      distinct.push_back(k);
    }
  }
  if (distinct.size() < 3) {
    throw std::invalid_argument("fit requires >= 3 distinct kappa values");
  }
  const double mean_k = design.col(0).mean();
  if ((design.col(0).array() - mean_k).abs().maxCoeff() < 1e-12) {
    throw std::invalid_argument("degenerate fit: zero kappa variance");
  }

  const Eigen::Vector2d coeffs = design.colPivHouseholderQr().solve(omega);
  const Eigen::VectorXd residual = omega - design * coeffs;
  const double ss_res = residual.squaredNorm();
  const double ss_tot = (omega.array() - omega.mean()).matrix().squaredNorm();

  ReductionMap map;
  map.omega_slope = coeffs[0];
  map.omega_intercept = coeffs[1];
  map.v_forward = xi_sum / n;
  map.fit_r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return map;
}

KappaCommand kappaOfOmega(const ReductionMap& map, double omega, double kappa_max) {
  if (map.omega_slope == 0.0) {
    throw std::invalid_argument("reduction map is not invertible (zero slope)");
  }
  KappaCommand cmd;
  cmd.kappa = (omega - map.omega_intercept) / map.omega_slope;
  if (std::abs(cmd.kappa) > kappa_max) {
    cmd.kappa = std::clamp(cmd.kappa, -kappa_max, kappa_max);
    cmd.saturated = true;
  }
  return cmd;
}

}  // namespace serpnav
