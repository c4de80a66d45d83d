#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "serpnav/pose.hpp"

namespace serpnav {

/// Traveling-wave gait parameters. The wave lifts the body in the x-z plane
/// while the average body curve bends in the ground plane with constant
/// curvature kappa, the steering input.
struct GaitParams {
  double amplitude{0.01};     // wave amplitude A, m
  double wavelength{0.18};    // wave length lambda, m
  double frequency{0.4};      // wave frequency f, cycles/s
  double curvature{0.0};      // average body curvature kappa, 1/m
  double body_length{0.72};   // L, m
  int link_count{12};

  double cyclePeriod() const { return 1.0 / frequency; }
  /// Throws std::invalid_argument when any invariant is violated.
  void validate() const;
};

/// Viscous friction coefficients: forward slip, backward slip, transverse.
struct FrictionCoefficients {
  double mu_f{0.1};
  double mu_b{0.3};
  double mu_t{0.5};

  void validate() const;
};

/// Discrete body state: per-link masses and lengths plus the commanded
/// joint configuration (planar bend angles and lift heights at joints).
struct LinkChain {
  Eigen::VectorXd link_masses;   // kg, one per link
  Eigen::VectorXd link_lengths;  // m, sums to body_length
  Eigen::VectorXd joint_angles;  // rad, link_count - 1 entries
  Eigen::VectorXd joint_heights; // m, link_count - 1 entries
};

/// Arclength intervals currently touching the ground plane.
struct ContactProfile {
  std::vector<std::pair<double, double>> intervals;  // within [-L/2, L/2]
};

/// Joint-centered pulses marking body regions able to effect curvature.
struct ActivationProfile {
  std::vector<double> pulse_centers;  // arclength s of each joint, m
  double pulse_width{0.008};          // m
};

/// Averaged steady-behavior body twist.
struct BodyVelocity {
  double xi_x{0};   // forward, m/s
  double xi_y{0};   // lateral, m/s
  double omega{0};  // angular, rad/s
};

struct SweepPoint {
  double amplitude{0};
  double kappa{0};
  BodyVelocity velocity;
};

/// Body-velocity map sampled over a rectangular (A, kappa) lattice.
struct SweepResult {
  std::vector<SweepPoint> grid;  // row-major over (A, kappa)
  std::vector<double> amplitudes;
  std::vector<double> kappas;
  int cycles_averaged{0};
  int settle_cycles{0};
};

/// Fitted unicycle reduction: constant forward speed plus the linear
/// curvature-to-turn-rate map omega = slope * kappa + intercept.
struct ReductionMap {
  double v_forward{0};
  double omega_slope{0};
  double omega_intercept{0};
  double fit_r_squared{0};

  double forwardOmega(double kappa) const {
    return omega_slope * kappa + omega_intercept;
  }
};

/// Inverse-map output: curvature command with actuation-limit flag.
struct KappaCommand {
  double kappa{0};
  bool saturated{false};
};

/// Integrator tuning knobs. These are calibration constants of the force
/// model, not gait parameters; defaults are chosen so the default sweep
/// settles within the first cycle and converges under step halving.
struct GaitSimOptions {
  int samples_per_link{12};
  double contact_threshold_factor{0.1};  // contact band = |z| <= factor * A
  double pulse_width{0.008};             // activation pulse width, m
  double contact_damping{1000.0};        // N*s/m per meter of contact
  double link_mass{0.1};                 // kg per link
  double dt{0};                          // integrator step; 0 = 1/(800 f)

  double effectiveDt(const GaitParams& params) const {
    return dt > 0 ? dt : 1.0 / (800.0 * params.frequency);
  }
};

/// Average body curve of Eq-style constant-curvature bend: returns the planar
/// point at arclength s. For |kappa| < 1e-9 the straight-line limit (s, 0).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> bodyCurvePoint(Scalar s, Scalar kappa) {
  if (std::abs(kappa) < Scalar{1e-9}) {
    return {s, Scalar{0}};
  }
  // (cos(ks) - 1)/k evaluated as -2 sin^2(ks/2)/k, which does not cancel.
  const Scalar half_sin = std::sin(kappa * s / Scalar{2});
  return {std::sin(kappa * s) / kappa, Scalar{-2} * half_sin * half_sin / kappa};
}

/// Lift wave z(s, t) = A sin(2 pi (f t + s / lambda)).
double liftHeight(double s, double t, const GaitParams& params);

/// Arclength intervals where the lift wave is within `threshold` of the
/// ground plane (|z| <= threshold).
ContactProfile contactProfile(double t, const GaitParams& params, double threshold);

/// One pulse per joint, centered at the joint arclength.
ActivationProfile makeActivationProfile(const GaitParams& params, double pulse_width);

/// 1 iff s lies within pulse_width/2 of some pulse center (closed intervals).
int activation(double s, const ActivationProfile& profile);

/// Full integrator state: world pose of the body frame, body twist
/// (xi_x, xi_y, omega), gait time, and the commanded chain shape.
struct GaitState {
  Pose2d pose;
  Eigen::Vector3d body_velocity{Eigen::Vector3d::Zero()};
  double time{0};
  LinkChain chain;
};

/// Fresh state at rest with the chain shaped for `params` at t = 0.
GaitState makeGaitState(const GaitParams& params, const GaitSimOptions& opts = {});

/// Advances the state by one explicit RK4 step of the contact-friction force
/// model. Throws std::invalid_argument unless 0 < dt <= 1/(50 f).
void stepDynamics(GaitState& state, const GaitParams& params,
                  const FrictionCoefficients& friction, double dt,
                  const GaitSimOptions& opts = {});

/// Integrates the state over `duration` seconds in steps of the configured
/// dt (subdivided to land exactly on the end time).
void integrateGait(GaitState& state, const GaitParams& params,
                   const FrictionCoefficients& friction, double duration,
                   const GaitSimOptions& opts = {});

/// Integrates from rest, discards `settle_cycles`, then averages the
/// per-cycle SE(2) log-twist over `average_cycles`.
BodyVelocity averageBodyVelocity(const GaitParams& params,
                                 const FrictionCoefficients& friction,
                                 int settle_cycles, int average_cycles,
                                 const GaitSimOptions& opts = {});

/// Evaluates averageBodyVelocity over the (A, kappa) lattice. Grid points are
/// independent; `threads` > 1 evaluates them concurrently with the result
/// assembled in grid order. The kappa grid must be symmetric about 0.
SweepResult sweepParameters(const std::vector<double>& amplitudes,
                            const std::vector<double>& kappas,
                            const GaitParams& base_params,
                            const FrictionCoefficients& friction,
                            int settle_cycles, int average_cycles,
                            const GaitSimOptions& opts = {}, int threads = 1);

/// Least-squares line through the (kappa, omega) pairs pooled over all
/// amplitudes; v_forward is the grid mean of xi_x. Requires >= 3 distinct
/// kappa values with nonzero variance.
ReductionMap fitReduction(const SweepResult& sweep);

/// Inverse map kappa = (omega - intercept) / slope, clamped to +-kappa_max
/// with the saturation flag set when the unclamped value exceeds the limit.
KappaCommand kappaOfOmega(const ReductionMap& map, double omega, double kappa_max);

}  // namespace serpnav
