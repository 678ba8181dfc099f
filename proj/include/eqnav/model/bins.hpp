// Biased inertial navigation system on SE_2(3)-torsor x se_2(3): state
// (T, b), input (w, g, tau) with virtual velocity slots, compact affine
// dynamics and the extended-pose configuration output.

#pragma once

#include <Eigen/Eigenvalues>

#include "eqnav/lie/se23.hpp"
#include "eqnav/types.hpp"

namespace eqnav {

/// System state: extended pose T and 9 bias coordinates (b_w, b_nu, b_a).
/// The physical system keeps the virtual velocity bias b_nu at zero.
struct SystemState {
  SE23d pose{};
  Vector9d bias = Vector9d::Zero();
};

/// System input: w = (omega, nu, accel) with the virtual slot nu, gravity as
/// a plain 3-vector, and bias rates tau. Physical inputs have nu = 0, tau = 0.
struct SystemInput {
  Vector9d w = Vector9d::Zero();
  Vector3d gravity{0.0, 0.0, -9.80665};
  Vector9d tau = Vector9d::Zero();

  /// Gravity embedded in algebra coordinates, (0, 0, g).
  Vector9d gravityCoords() const {
    Vector9d g = Vector9d::Zero();
    g.segment<3>(6) = gravity;
    return g;
  }
};

/// Extended pose measurement with its timestamp.
struct Measurement {
  SE23d pose{};
  double t = 0.0;
};

/// Tangent of the system state in raw form, as integrators consume it.
struct StateVelocity {
  Matrix5d pose = Matrix5d::Zero();
  Vector9d bias = Vector9d::Zero();
};

/// Right invariant generator feeding velocity into the position rate: a 5x5
/// matrix with T's velocity in the position column and zeros elsewhere.
inline Matrix5d driftGenerator(const SE23d& pose) {
  Matrix5d m = Matrix5d::Zero();
  m.block<3, 1>(0, 3) = pose.v();
  return m;
}

/// Drift part of the dynamics, (driftGenerator(T) T, 0).
inline StateVelocity driftField(const SystemState& xi) {
  StateVelocity out;
  out.pose = driftGenerator(xi.pose) * xi.pose.asMatrix();
  return out;
}

/// Input part of the dynamics, (T (w - b)^ + g^ T, tau).
inline StateVelocity inputField(const SystemState& xi, const SystemInput& u) {
  StateVelocity out;
  const Matrix5d t = xi.pose.asMatrix();
  out.pose = t * SE23d::wedge(u.w - xi.bias) + SE23d::wedge(u.gravityCoords()) * t;
  out.bias = u.tau;
  return out;
}

/// Full system dynamics in compact affine form.
inline StateVelocity systemDynamics(const SystemState& xi, const SystemInput& u) {
  StateVelocity out = inputField(xi, u);
  out.pose += driftGenerator(xi.pose) * xi.pose.asMatrix();
  return out;
}

/// Configuration output h(xi) = T.
inline SE23d output(const SystemState& xi) { return xi.pose; }

/**
 * @brief Draw an extended pose measurement y = T exp(n^) with n ~ N(0, cov).
 *
 * Noise is attached on the right (body frame), matching the measurement
 * model used throughout the simulation. The covariance may be singular
 * (noise-free experiments pass zero), so the sampler uses the symmetric
 * eigendecomposition square root.
 *
 * @tparam Rng any generator exposing double gaussian()
 */
template <typename Rng>
Measurement sampleMeasurement(const SE23d& pose, const Matrix9d& noise_cov, Rng& rng,
                              double t = 0.0) {
  Vector9d z;
  for (int i = 0; i < 9; ++i) z(i) = rng.gaussian();
  const Eigen::SelfAdjointEigenSolver<Matrix9d> eig(noise_cov);
  const Matrix9d sqrt_cov = eig.eigenvectors() *
                            eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                            eig.eigenvectors().transpose();
  return Measurement{pose * SE23d::exp(sqrt_cov * z), t};
}

}  // namespace eqnav
