// Equivariant filter for the biased INS. The filter state is a symmetry
// group element X^ = (A^, a^) paired with an 18x18 Riccati matrix in the
// chart coordinates eps = (log(e1), e2) of the state error e = phi(X^-1, xi).
// Propagation integrates the lifted dynamics and the Riccati flow jointly;
// measurements are applied as discrete updates.

#pragma once

#include <Eigen/Cholesky>
#include <cmath>

#include "eqnav/errors.hpp"
#include "eqnav/lie/sdp.hpp"
#include "eqnav/model/symmetry.hpp"
#include "eqnav/types.hpp"

namespace eqnav {

/// Gain configuration: P drives the Riccati flow, Q weighs the output
/// residual, Sigma0 seeds the Riccati matrix. All must be SPD.
struct EqfConfig {
  Matrix18d P = Matrix18d::Identity() * 1e-4;
  Matrix9d Q = Matrix9d::Identity() * 1e-2;
  Matrix18d Sigma0 = Matrix18d::Identity();
};

class EqFilter {
 public:
  using Matrix9x18 = Eigen::Matrix<double, 9, 18>;
  using Matrix18x9 = Eigen::Matrix<double, 18, 9>;

  explicit EqFilter(const EqfConfig& cfg = EqfConfig{})
      : cfg_(cfg), sigma_(cfg.Sigma0) {}

  /// Re-anchor the group state so that estimate() equals xi_hat. Used for
  /// deliberately wrong initializations; the Riccati matrix is left to the
  /// configured Sigma0.
  void setEstimate(const SystemState& xi_hat) {
    x_ = SDPd(xi_hat.pose, -(xi_hat.pose.Adjoint() * xi_hat.bias));
  }

  /// Origin input u0 = psi(X^-1, u).
  SystemInput originInput(const SystemInput& u) const {
    return inputAction(x_.inverse(), u);
  }

  /// Linearized error-state matrix at the origin for a given origin input.
  static Matrix18d stateMatrix(const SystemInput& u0) {
    Matrix18d a = Matrix18d::Zero();
    a.block<3, 3>(3, 6).setIdentity();
    a.block<3, 3>(6, 0) = SO3d::wedge(u0.gravity);
    a.block<9, 9>(0, 9) = -Matrix9d::Identity();
    a.block<9, 9>(9, 9) = SE23d::adjoint(u0.w + u0.gravityCoords());
    return a;
  }

  /// Linearized output matrix, constant [I 0].
  static Matrix9x18 outputMatrix() {
    Matrix9x18 c = Matrix9x18::Zero();
    c.block<9, 9>(0, 0).setIdentity();
    return c;
  }

  /// Coordinate map turning a gain vector K r into an innovation tangent.
  /// The differential of E -> phi(E, xi0) at the identity is
  /// blockdiag(I, -I) in chart coordinates (its own pseudoinverse), hence
  /// the sign flip on the algebra slot.
  static SDPTangentd tangentFromGain(const Vector18d& k) {
    return SDPTangentd(k.head<9>(), -k.tail<9>());
  }

  /**
   * @brief Output residual delta(rho(X^-1, y)) = log(y A^-1).
   * @throws ChartBoundary when the residual rotation reaches the chart edge
   */
  Vector9d residual(const SE23d& y) const {
    try {
      return SE23d::log(y * x_.A().inverse());
    } catch (const AngleNearPi&) {
      throw ChartBoundary();
    }
  }

  /// Continuous-form innovation Delta = tangentFromGain(Sigma C^T Q^-1 r).
  SDPTangentd innovation(const Vector9d& r) const {
    const Matrix18x9 gain = sigma_.leftCols<9>() * cfg_.Q.inverse();
    return tangentFromGain(gain * r);
  }

  /**
   * @brief Advance the state and Riccati matrix by one RK4 step of length dt
   * with zero innovation.
   * @throws NonFiniteState if integration produced NaN/Inf entries
   */
  void propagate(const SystemInput& u, double dt) {
    Matrix5d a = x_.A().asMatrix();
    Vector9d alg = x_.a();
    Matrix18d sig = sigma_;

    const auto rate = [&u, this](const Matrix5d& am, const Vector9d& av,
                                 const Matrix18d& sm) {
      const SDPd x(SE23d(Matrix3d(am.block<3, 3>(0, 0)), am.block<3, 1>(0, 3),
                         am.block<3, 1>(0, 4)),
                   av);
      const SDPVelocityd vel = liftedDynamics(x, u);
      const Matrix18d at = stateMatrix(inputAction(x.inverse(), u));
      // Input noise perturbs the origin input through AdM(A^), so the state
      // gain is conjugated into origin coordinates before entering the flow.
      const Matrix9d ad = x.A().Adjoint();
      Matrix18d pt = Matrix18d::Zero();
      pt.topLeftCorner<9, 9>() = ad * cfg_.P.topLeftCorner<9, 9>() * ad.transpose();
      pt.bottomRightCorner<9, 9>() =
          ad * cfg_.P.bottomRightCorner<9, 9>() * ad.transpose();
      const Matrix18d sdot = at * sm + sm * at.transpose() + pt;
      return std::make_tuple(vel.dA, vel.da, sdot);
    };

    const auto [k1a, k1v, k1s] = rate(a, alg, sig);
    const auto [k2a, k2v, k2s] =
        rate(a + 0.5 * dt * k1a, alg + 0.5 * dt * k1v, sig + 0.5 * dt * k1s);
    const auto [k3a, k3v, k3s] =
        rate(a + 0.5 * dt * k2a, alg + 0.5 * dt * k2v, sig + 0.5 * dt * k2s);
    const auto [k4a, k4v, k4s] = rate(a + dt * k3a, alg + dt * k3v, sig + dt * k3s);

    a += dt / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
    alg += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    sig += dt / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s);

    x_ = SDPd(SE23d::fromMatrixProjected(a), alg);
    sigma_ = 0.5 * (sig + sig.transpose());
    t_ += dt;
    checkFinite();
  }

  /// Output gain expressed in the residual frame. The configured Q weighs
  /// the measurement noise, which lives in the body frame (y = T exp(n^));
  /// the residual log(y A^-1) sees that noise transported by AdM(A^), so the
  /// gain is conjugated accordingly.
  Matrix9d outputGain() const {
    const Matrix9d ad = x_.A().Adjoint();
    return ad * cfg_.Q * ad.transpose();
  }

  /**
   * @brief Discrete measurement update.
   *
   * Builds the Kalman gain from S = C Sigma C^T + Q_t with the transported
   * output gain Q_t, applies the innovation as the exact time-1 flow of the
   * right-translated correction field, and updates the covariance in Joseph
   * form followed by the chart transport to the corrected state. The
   * transport L = blockdiag(J_l(Delta_1), AdM(exp(Delta_1))) is the discrete
   * counterpart of the innovation term in the linearized error dynamics; it
   * re-expresses error deviations in the chart anchored at the post-update
   * state and reduces to the identity for small corrections.
   *
   * @throws ChartBoundary, SingularInnovationCov, NonFiniteState
   */
  void update(const Measurement& y) {
    const Vector9d r = residual(y.pose);
    const Matrix9d qt = outputGain();

    const Matrix9d s = sigma_.topLeftCorner<9, 9>() + qt;
    const Eigen::LLT<Matrix9d> llt(s);
    if (llt.info() != Eigen::Success) {
      throw SingularInnovationCov();
    }
    const Matrix18x9 gain = llt.solve(sigma_.topRows<9>()).transpose();
    const SDPTangentd delta = tangentFromGain(gain * r);

    x_ = SDPd::exp(delta) * x_;

    const Matrix18d ikc = Matrix18d::Identity() - gain * outputMatrix();
    sigma_ = ikc * sigma_ * ikc.transpose() + gain * qt * gain.transpose();

    Matrix18d transport = Matrix18d::Zero();
    transport.topLeftCorner<9, 9>() = SE23d::leftJacobian(delta.w1);
    transport.bottomRightCorner<9, 9>() = SE23d::exp(delta.w1).Adjoint();
    sigma_ = transport * sigma_ * transport.transpose();

    sigma_ = 0.5 * (sigma_ + sigma_.transpose()).eval();
    checkFinite();
  }

  /// State estimate xi^ = phi(X^, xi0) = (A^, -AdM(A^-1) a^).
  SystemState estimate() const { return stateAction(x_, stateOrigin()); }

  const SDPd& state() const { return x_; }
  const Matrix18d& covariance() const { return sigma_; }
  const EqfConfig& config() const { return cfg_; }
  double time() const { return t_; }

 private:
  void checkFinite() const {
    if (!x_.A().asMatrix().allFinite() || !x_.a().allFinite() || !sigma_.allFinite()) {
      throw NonFiniteState();
    }
  }

  EqfConfig cfg_;
  SDPd x_;
  Matrix18d sigma_;
  double t_ = 0.0;
};

}  // namespace eqnav
