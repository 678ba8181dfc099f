// SO(3) primitives: wedge/vee, exponential, logarithm, left Jacobian.

#pragma once

#include <cmath>

#include "eqnav/errors.hpp"
#include "eqnav/types.hpp"

namespace eqnav {

/**
 * @brief Static helpers for the rotation group SO(3).
 *
 * Rotations are plain 3x3 matrices; all maps are total except log, which
 * rejects rotations whose angle is within ~3e-5 of pi (trace <= -1 + 1e-9).
 *
 * @tparam Scalar floating point type
 */
template <typename Scalar>
struct SO3 {
  using Vector3 = Vec3<Scalar>;
  using Matrix3 = Mat3<Scalar>;

  /// Angle below which Taylor expansions replace the closed forms.
  static constexpr Scalar kSmallAngle = Scalar(1e-6);

  /// skew(v) * u = v x u
  static Matrix3 wedge(const Vector3& v) {
    Matrix3 m;
    // clang-format off
    m << Scalar(0), -v.z(),      v.y(),
         v.z(),      Scalar(0), -v.x(),
        -v.y(),      v.x(),      Scalar(0);
    // clang-format on
    return m;
  }

  static Vector3 vee(const Matrix3& m) { return Vector3(m(2, 1), m(0, 2), m(1, 0)); }

  /// Rodrigues formula; second order Taylor expansion below kSmallAngle.
  static Matrix3 exp(const Vector3& omega) {
    const Scalar theta2 = omega.squaredNorm();
    const Matrix3 w = wedge(omega);
    Scalar c1, c2;  // sin(t)/t, (1-cos(t))/t^2
    if (theta2 < kSmallAngle * kSmallAngle) {
      c1 = Scalar(1) - theta2 / Scalar(6);
      c2 = Scalar(0.5) - theta2 / Scalar(24);
    } else {
      const Scalar theta = std::sqrt(theta2);
      c1 = std::sin(theta) / theta;
      c2 = (Scalar(1) - std::cos(theta)) / theta2;
    }
    return Matrix3::Identity() + c1 * w + c2 * w * w;
  }

  /**
   * @brief Rotation logarithm, |result| <= pi.
   * @throws AngleNearPi when trace(R) <= -1 + 1e-9 (angle within ~3e-5 of pi)
   */
  static Vector3 log(const Matrix3& r) {
    const Scalar tr = r.trace();
    if (tr <= Scalar(-1) + Scalar(1e-9)) {
      throw AngleNearPi();
    }
    const Vector3 w = vee(Matrix3(r - r.transpose())) * Scalar(0.5);  // |w| = sin(theta)
    const Scalar cos_theta = (tr - Scalar(1)) * Scalar(0.5);
    const Scalar sin_theta = w.norm();
    const Scalar theta = std::atan2(sin_theta, cos_theta);
    if (theta < kSmallAngle) {
      return w * (Scalar(1) + theta * theta / Scalar(6));
    }
    return w * (theta / sin_theta);
  }

  /// Left Jacobian of SO(3), J_l(omega) = sum_k wedge(omega)^k / (k+1)!.
  static Matrix3 leftJacobian(const Vector3& omega) {
    const Scalar theta2 = omega.squaredNorm();
    const Matrix3 w = wedge(omega);
    Scalar c1, c2;  // (1-cos(t))/t^2, (t-sin(t))/t^3
    if (theta2 < kSmallAngle * kSmallAngle) {
      c1 = Scalar(0.5) - theta2 / Scalar(24);
      c2 = Scalar(1) / Scalar(6) - theta2 / Scalar(120);
    } else {
      const Scalar theta = std::sqrt(theta2);
      c1 = (Scalar(1) - std::cos(theta)) / theta2;
      c2 = (theta - std::sin(theta)) / (theta2 * theta);
    }
    return Matrix3::Identity() + c1 * w + c2 * w * w;
  }

  /// Closed-form inverse of the left Jacobian (valid for angle < pi).
  static Matrix3 leftJacobianInverse(const Vector3& omega) {
    const Scalar theta2 = omega.squaredNorm();
    const Matrix3 w = wedge(omega);
    Scalar c;  // 1/t^2 - (1+cos(t)) / (2 t sin(t))
    if (theta2 < kSmallAngle * kSmallAngle) {
      c = Scalar(1) / Scalar(12) + theta2 / Scalar(720);
    } else {
      const Scalar theta = std::sqrt(theta2);
      c = Scalar(1) / theta2 -
          (Scalar(1) + std::cos(theta)) / (Scalar(2) * theta * std::sin(theta));
    }
    return Matrix3::Identity() - Scalar(0.5) * w + c * w * w;
  }

  /// Nearest rotation to an almost-orthonormal matrix (Newton polar iteration).
  static Matrix3 project(const Matrix3& m) {
    Matrix3 r = m;
    for (int i = 0; i < 4; ++i) {
      r = Scalar(0.5) * (r + r.inverse().transpose());
    }
    return r;
  }

  static bool isRotation(const Matrix3& r, Scalar tol) {
    return (r.transpose() * r - Matrix3::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(r.determinant() - Scalar(1)) <= tol;
  }
};

using SO3d = SO3<double>;

}  // namespace eqnav
