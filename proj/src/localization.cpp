#include "serpnav/localization.hpp"

#include <cmath>
#include <stdexcept>

namespace serpnav {

OdometrySimulator::OdometrySimulator(const OdometryNoise& noise, uint64_t seed)
    : noise_(noise), rng_(seed) {}

OdometryObservation OdometrySimulator::observe(const RelativePose& true_delta) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double drift_step =
      std::exp(std::log(noise_.drift_median) + noise_.drift_sigma * gauss(rng_));
  proposed_scale_ = scale_ * drift_step;

  const double step = true_delta.translation.norm();
  const double sigma_t = noise_.translation_sigma_frac * step;
  OdometryObservation obs;
  obs.delta.translation =
      proposed_scale_ * true_delta.translation +
      Eigen::Vector2d(sigma_t * gauss(rng_), sigma_t * gauss(rng_));
  obs.delta.rotation =
      normalizeAngle(true_delta.rotation + noise_.rotation_sigma * gauss(rng_));
  return obs;
}

void OdometrySimulator::commit(bool accepted, bool gated, double anchor_ratio) {
  if (!gated) {
    scale_ = proposed_scale_;  // every proposal enters the map; drift compounds
    return;
  }
  if (accepted) {
    scale_ = proposed_scale_ * anchor_ratio;  // prior-consistent tracking re-anchors
  }
  // Rejected: the proposal is discarded, the map keeps its previous scale.
}

PoseEstimate initializeKnownMotion(const Pose2d& start_pose,
                                   const RelativePose& true_delta) {
  if (!(true_delta.translation.norm() > 0.0)) {
    throw std::invalid_argument(
        "known-motion initialization needs a nonzero baseline");
  }
  PoseEstimate est;
  est.pose = start_pose;
  est.scale = 1.0;
  est.cycle = 0;
  return est;
}

RelativePose predictedDelta(double kappa_cmd, const ReductionMap& map, double dt) {
  const Pose2d d = twistDisplacement(map.v_forward, map.forwardOmega(kappa_cmd), dt);
  return {{d.x, d.y}, d.theta};
}

PoseEstimate predict(const PoseEstimate& est, double kappa_cmd,
                     const ReductionMap& map, double dt) {
  const RelativePose d = predictedDelta(kappa_cmd, map, dt);
  PoseEstimate out = est;
  out.pose = compose(est.pose, Pose2d{d.translation.x(), d.translation.y(), d.rotation});
  out.cycle = est.cycle + 1;
  return out;
}

FusionResult gateAndFuse(const PoseEstimate& est, const OdometryObservation& obs,
                         const RelativePose& predicted, const GatingConfig& cfg) {
  FusionResult result;
  const Eigen::Vector2d scaled_obs = est.scale * obs.delta.translation;
  const double translation_gap =
      (obs.delta.translation - predicted.translation).norm();
  const double rotation_gap =
      std::abs(normalizeAngle(obs.delta.rotation - predicted.rotation));
  result.accepted = !cfg.gating_enabled ||
                    (translation_gap <= cfg.translation_gate &&
                     rotation_gap <= cfg.rotation_gate);

  RelativePose fused = predicted;
  double scale = est.scale;
  if (result.accepted) {
    const double w = cfg.fusion_weight;
    fused.translation = predicted.translation + w * (scaled_obs - predicted.translation);
    fused.rotation = normalizeAngle(
        predicted.rotation + w * normalizeAngle(obs.delta.rotation - predicted.rotation));
    const double obs_len = obs.delta.translation.norm();
    if (obs_len > 0.0) {
      result.anchor_ratio = predicted.translation.norm() / obs_len;
      scale = scale + cfg.scale_smoothing * (result.anchor_ratio - scale);
    }
  }

  result.estimate.pose = compose(
      est.pose, Pose2d{fused.translation.x(), fused.translation.y(), fused.rotation});
  result.estimate.scale = scale;
  result.estimate.cycle = est.cycle + 1;
  return result;
}

GatingConfig defaultGates(const OdometryNoise& noise, double step_length) {
  GatingConfig cfg;
  cfg.translation_gate = 3.0 * noise.translation_sigma_frac * step_length;
  cfg.rotation_gate = 3.0 * noise.rotation_sigma;
  return cfg;
}

}  // namespace serpnav
