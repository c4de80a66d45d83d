#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace serpnav {

/// Wraps an angle to the repo-wide convention (-pi, pi].
template <typename Scalar>
Scalar normalizeAngle(Scalar angle) {
  constexpr Scalar kPi = static_cast<Scalar>(M_PI);
  Scalar a = std::remainder(angle, Scalar{2} * kPi);
  if (a <= -kPi) a += Scalar{2} * kPi;
  if (a > kPi) a -= Scalar{2} * kPi;
  return a;
}

/// Planar rigid pose: position (x, y) and heading theta in (-pi, pi].
template <typename Scalar>
struct Pose2 {
  Scalar x{0};
  Scalar y{0};
  Scalar theta{0};

  Pose2() = default;
  Pose2(Scalar x_, Scalar y_, Scalar theta_) : x(x_), y(y_), theta(theta_) {}

  Eigen::Matrix<Scalar, 2, 1> position() const { return {x, y}; }
  Eigen::Matrix<Scalar, 2, 1> heading() const {
    return {std::cos(theta), std::sin(theta)};
  }
  Eigen::Matrix<Scalar, 2, 2> rotation() const {
    const Scalar c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix<Scalar, 2, 2> r;
    r << c, -s, s, c;
    return r;
  }
};

using Pose2d = Pose2<double>;

/// Pose composition a * b: b expressed in a's frame, result in a's parent frame.
template <typename Scalar>
Pose2<Scalar> compose(const Pose2<Scalar>& a, const Pose2<Scalar>& b) {
  const Scalar c = std::cos(a.theta), s = std::sin(a.theta);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y,
          normalizeAngle(a.theta + b.theta)};
}

template <typename Scalar>
Pose2<Scalar> inverse(const Pose2<Scalar>& p) {
  const Scalar c = std::cos(p.theta), s = std::sin(p.theta);
  return {-(c * p.x + s * p.y), -(-s * p.x + c * p.y), normalizeAngle(-p.theta)};
}

/// Relative pose of b in a's frame: inverse(a) * b.
template <typename Scalar>
Pose2<Scalar> between(const Pose2<Scalar>& a, const Pose2<Scalar>& b) {
  return compose(inverse(a), b);
}

/// SE(2) exponential: body-frame twist (vx*T, vy*T, w*T) -> displacement pose.
template <typename Scalar>
Pose2<Scalar> expTwist(const Eigen::Matrix<Scalar, 3, 1>& xi) {
  const Scalar w = xi.z();
  Scalar a, b;  // a = sin(w)/w, b = (1 - cos(w))/w
  if (std::abs(w) < Scalar{1e-6}) {
    a = Scalar{1} - w * w / Scalar{6};
    b = w / Scalar{2} - w * w * w / Scalar{24};
  } else {
    a = std::sin(w) / w;
    b = (Scalar{1} - std::cos(w)) / w;
  }
  return {a * xi.x() - b * xi.y(), b * xi.x() + a * xi.y(), normalizeAngle(w)};
}

/// SE(2) logarithm: displacement pose -> constant body twist integrated over unit time.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> logTwist(const Pose2<Scalar>& p) {
  const Scalar w = p.theta;
  Scalar a, b;
  if (std::abs(w) < Scalar{1e-6}) {
    a = Scalar{1} - w * w / Scalar{6};
    b = w / Scalar{2} - w * w * w / Scalar{24};
  } else {
    a = std::sin(w) / w;
    b = (Scalar{1} - std::cos(w)) / w;
  }
  const Scalar det = a * a + b * b;
  return {(a * p.x + b * p.y) / det, (-b * p.x + a * p.y) / det, w};
}

}  // namespace serpnav
