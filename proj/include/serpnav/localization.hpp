#pragma once

#include <cstdint>
#include <random>

#include "serpnav/gait.hpp"
#include "serpnav/kinematics.hpp"

namespace serpnav {

/// Body-frame motion between consecutive kept frames.
struct RelativePose {
  Eigen::Vector2d translation{0, 0};  // m
  double rotation{0};                 // rad
};

/// Pose estimate with the running multiplier applied to observed translations.
struct PoseEstimate {
  Pose2d pose;
  double scale{1.0};
  int cycle{0};
};

/// Simulated visual-odometry measurement of one cycle's motion.
struct OdometryObservation {
  RelativePose delta;
};

struct GatingConfig {
  double translation_gate{0};   // m; 0 derives 3 sigma from the noise model
  double rotation_gate{0};      // rad; 0 derives 3 sigma from the noise model
  double fusion_weight{0.7};    // blend toward the accepted observation
  double scale_smoothing{0.25}; // step of the scale update toward the ratio
  bool gating_enabled{true};
};

/// Synthetic odometry error model: Gaussian noise plus a per-cycle
/// multiplicative scale drift (lognormal steps).
struct OdometryNoise {
  double translation_sigma_frac{0.05};  // fraction of the step length
  double rotation_sigma{0.01};          // rad
  double drift_median{1.001};           // per-cycle multiplicative drift
  double drift_sigma{0.005};            // sigma of log drift steps
};

/// Stand-in for the monocular odometry front end. Each cycle it proposes an
/// observation whose translation carries the accumulated scale error of the
/// internal map. Accepted prior-consistent observations re-anchor that scale
/// to the motion prior (the effect of tracking only prior-consistent
/// matches); rejected proposals are discarded and leave the map untouched.
/// Without gating every proposal is adopted and the drift compounds freely.
class OdometrySimulator {
 public:
  OdometrySimulator(const OdometryNoise& noise, uint64_t seed);

  /// Draws the drift step and Gaussian noise for this cycle's observation.
  OdometryObservation observe(const RelativePose& true_delta);

  /// Resolves the pending proposal. `anchor_ratio` is the estimator's
  /// |predicted| / |observed| translation ratio for an accepted observation.
  void commit(bool accepted, bool gated, double anchor_ratio);

  double internalScale() const { return scale_; }

 private:
  OdometryNoise noise_;
  std::mt19937_64 rng_;
  double scale_{1.0};
  double proposed_scale_{1.0};
};

/// Known-motion wide-baseline initialization: anchors the estimate at the
/// start pose with unit scale. Throws on a zero-baseline delta.
PoseEstimate initializeKnownMotion(const Pose2d& start_pose,
                                   const RelativePose& true_delta);

/// Body-frame displacement the unicycle model predicts for one cycle.
RelativePose predictedDelta(double kappa_cmd, const ReductionMap& map, double dt);

/// Unicycle-model pose prediction; scale is unchanged.
PoseEstimate predict(const PoseEstimate& est, double kappa_cmd,
                     const ReductionMap& map, double dt);

struct FusionResult {
  PoseEstimate estimate;
  bool accepted{false};
  double anchor_ratio{1.0};
};

/// Accepts the observation iff it agrees with the motion prior within the
/// gates; accepted observations are scale-corrected and blended into the
/// predicted delta, rejected ones leave the prediction untouched. The scale
/// estimate relaxes toward |predicted| / |observed| on acceptance.
FusionResult gateAndFuse(const PoseEstimate& est, const OdometryObservation& obs,
                         const RelativePose& predicted, const GatingConfig& cfg);

/// 3-sigma gates derived from the noise model at a given step length.
GatingConfig defaultGates(const OdometryNoise& noise, double step_length);

}  // namespace serpnav
