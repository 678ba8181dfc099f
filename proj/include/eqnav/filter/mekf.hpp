// Multiplicative EKF baseline: multiplicative attitude error, Euclidean
// position/velocity/bias errors, 15-dimensional covariance ordered
// (theta, p, v, b_gyro, b_accel). Attitude error is attached in the body
// frame, R = R^ exp(theta^), matching the body-frame measurement noise.

#pragma once

#include <Eigen/Cholesky>
#include <cmath>

#include "eqnav/errors.hpp"
#include "eqnav/lie/so3.hpp"
#include "eqnav/model/bins.hpp"
#include "eqnav/types.hpp"

namespace eqnav {

struct MekfConfig {
  Matrix15d P = Matrix15d::Identity() * 1e-4;
  Matrix9d Q = Matrix9d::Identity() * 1e-2;
  Matrix15d Sigma0 = Matrix15d::Identity();
  Vector3d gravity{0.0, 0.0, -9.80665};
};

class Mekf {
 public:
  using Matrix9x15 = Eigen::Matrix<double, 9, 15>;
  using Matrix15x9 = Eigen::Matrix<double, 15, 9>;

  explicit Mekf(const MekfConfig& cfg = MekfConfig{})
      : cfg_(cfg), sigma_(cfg.Sigma0) {}

  void setEstimate(const Matrix3d& r, const Vector3d& p, const Vector3d& v,
                   const Vector3d& bw, const Vector3d& ba) {
    r_ = r;
    p_ = p;
    v_ = v;
    bw_ = bw;
    ba_ = ba;
  }

  /// Continuous error-state Jacobian at the current linearization point.
  static Matrix15d errorJacobian(const Matrix3d& r, const Vector3d& omega_corr,
                                 const Vector3d& accel_corr) {
    Matrix15d f = Matrix15d::Zero();
    f.block<3, 3>(0, 0) = -SO3d::wedge(omega_corr);
    f.block<3, 3>(0, 9) = -Matrix3d::Identity();
    f.block<3, 3>(3, 6).setIdentity();
    f.block<3, 3>(6, 0) = -r * SO3d::wedge(accel_corr);
    f.block<3, 3>(6, 12) = -r;
    return f;
  }

  /**
   * @brief One propagation step: RK4 on the mean, standard first-order
   * error-state transition on the covariance (Phi = I + F dt).
   * @throws NonFiniteState on NaN/Inf
   */
  void propagate(const Vector3d& omega_m, const Vector3d& accel_m, double dt) {
    Matrix3d r = r_;
    Vector3d p = p_, v = v_;
    const Vector3d omega = omega_m - bw_;
    const Vector3d accel = accel_m - ba_;

    const auto rate = [&](const Matrix3d& rm, const Vector3d& vm) {
      return std::make_tuple(Matrix3d(rm * SO3d::wedge(omega)), vm,
                             Vector3d(rm * accel + cfg_.gravity));
    };

    const auto [r1, p1, v1] = rate(r, v);
    const auto [r2, p2, v2] = rate(r + 0.5 * dt * r1, v + 0.5 * dt * v1);
    const auto [r3, p3, v3] = rate(r + 0.5 * dt * r2, v + 0.5 * dt * v2);
    const auto [r4, p4, v4] = rate(r + dt * r3, v + dt * v3);

    const Matrix15d phi =
        Matrix15d::Identity() + errorJacobian(r_, omega, accel) * dt;
    sigma_ = phi * sigma_ * phi.transpose() + cfg_.P * dt;
    sigma_ = 0.5 * (sigma_ + sigma_.transpose()).eval();

    r_ = SO3d::project(Matrix3d(r + dt / 6.0 * (r1 + 2 * r2 + 2 * r3 + r4)));
    p_ = p + dt / 6.0 * (p1 + 2 * p2 + 2 * p3 + p4);
    v_ = v + dt / 6.0 * (v1 + 2 * v2 + 2 * v3 + v4);
    t_ += dt;
    checkFinite();
  }

  /**
   * @brief Discrete update from an extended pose measurement.
   * @throws SingularInnovationCov, AngleNearPi (residual at the log cut),
   *         NonFiniteState
   */
  void update(const Measurement& y) {
    Vector9d resid;
    resid.segment<3>(0) = SO3d::log(Matrix3d(r_.transpose() * y.pose.R()));
    resid.segment<3>(3) = y.pose.p() - p_;
    resid.segment<3>(6) = y.pose.v() - v_;

    const Matrix9d s = sigma_.topLeftCorner<9, 9>() + cfg_.Q;
    const Eigen::LLT<Matrix9d> llt(s);
    if (llt.info() != Eigen::Success) {
      throw SingularInnovationCov();
    }
    const Matrix15x9 gain = llt.solve(sigma_.topRows<9>()).transpose();
    const Vector15d delta = gain * resid;

    r_ = r_ * SO3d::exp(delta.segment<3>(0));
    p_ += delta.segment<3>(3);
    v_ += delta.segment<3>(6);
    bw_ += delta.segment<3>(9);
    ba_ += delta.segment<3>(12);

    Matrix9x15 h = Matrix9x15::Zero();
    h.leftCols<9>().setIdentity();
    const Matrix15d ikh = Matrix15d::Identity() - gain * h;
    sigma_ = ikh * sigma_ * ikh.transpose() + gain * cfg_.Q * gain.transpose();
    sigma_ = 0.5 * (sigma_ + sigma_.transpose()).eval();
    checkFinite();
  }

  const Matrix3d& R() const { return r_; }
  const Vector3d& p() const { return p_; }
  const Vector3d& v() const { return v_; }
  const Vector3d& gyroBias() const { return bw_; }
  const Vector3d& accelBias() const { return ba_; }
  const Matrix15d& covariance() const { return sigma_; }
  const MekfConfig& config() const { return cfg_; }
  double time() const { return t_; }

 private:
  void checkFinite() const {
    if (!r_.allFinite() || !p_.allFinite() || !v_.allFinite() || !bw_.allFinite() ||
        !ba_.allFinite() || !sigma_.allFinite()) {
      throw NonFiniteState();
    }
  }

  MekfConfig cfg_;
  Matrix3d r_ = Matrix3d::Identity();
  Vector3d p_ = Vector3d::Zero();
  Vector3d v_ = Vector3d::Zero();
  Vector3d bw_ = Vector3d::Zero();
  Vector3d ba_ = Vector3d::Zero();
  Matrix15d sigma_;
  double t_ = 0.0;
};

}  // namespace eqnav
