// The extended pose group SE_2(3): 5x5 matrices [R p v; 0 I2] bundling
// rotation, position and velocity. Algebra coordinates are ordered
// (omega, nu, alpha) with nu paired to the position column and alpha to the
// velocity column.

#pragma once

#include <cmath>

#include "eqnav/errors.hpp"
#include "eqnav/lie/so3.hpp"
#include "eqnav/types.hpp"

namespace eqnav {

/**
 * @brief An element of SE_2(3) stored as (R, p, v).
 *
 * @tparam Scalar floating point type
 */
template <typename Scalar>
class SE23 {
 public:
  using SO3Type = SO3<Scalar>;
  using Vector3 = Vec3<Scalar>;
  using Vector9 = Vec9<Scalar>;
  using Matrix3 = Mat3<Scalar>;
  using Matrix5 = Mat5<Scalar>;
  using Matrix9 = Mat9<Scalar>;

  /// Identity element.
  SE23() : r_(Matrix3::Identity()), p_(Vector3::Zero()), v_(Vector3::Zero()) {}

  SE23(const Matrix3& r, const Vector3& p, const Vector3& v) : r_(r), p_(p), v_(v) {}

  /**
   * @brief Construct from a 5x5 matrix, validating the group structure.
   * @throws StructureViolation if rows 4-5 are not [0 I2] or R is not a
   *         rotation, both to 1e-9
   */
  explicit SE23(const Matrix5& m) : r_(m.template block<3, 3>(0, 0)) {
    Matrix5 bottom_ref = Matrix5::Zero();
    bottom_ref.template block<2, 2>(3, 3).setIdentity();
    if ((m.template block<2, 5>(3, 0) - bottom_ref.template block<2, 5>(3, 0))
            .cwiseAbs()
            .maxCoeff() > Scalar(1e-9)) {
      throw StructureViolation("SE23: rows 4-5 must be [0 I]");
    }
    if (!SO3Type::isRotation(r_, Scalar(1e-9))) {
      throw StructureViolation("SE23: top-left block is not a rotation");
    }
    p_ = m.template block<3, 1>(0, 3);
    v_ = m.template block<3, 1>(0, 4);
  }

  /// Construct from a near-group 5x5 matrix, snapping R to the nearest
  /// rotation. Used by integrators, which drift off the manifold at O(dt^5).
  static SE23 fromMatrixProjected(const Matrix5& m) {
    return SE23(SO3Type::project(m.template block<3, 3>(0, 0)),
                m.template block<3, 1>(0, 3), m.template block<3, 1>(0, 4));
  }

  /// Hat map R^9 -> se_2(3).
  static Matrix5 wedge(const Vector9& u) {
    Matrix5 m = Matrix5::Zero();
    m.template block<3, 3>(0, 0) = SO3Type::wedge(u.template segment<3>(0));
    m.template block<3, 1>(0, 3) = u.template segment<3>(3);
    m.template block<3, 1>(0, 4) = u.template segment<3>(6);
    return m;
  }

  /**
   * @brief Inverse of wedge.
   * @throws StructureViolation if the matrix deviates from the se_2(3)
   *         pattern by more than 1e-9
   */
  static Vector9 vee(const Matrix5& m) {
    const Matrix3 top = m.template block<3, 3>(0, 0);
    if ((top + top.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-9) ||
        m.template block<2, 5>(3, 0).cwiseAbs().maxCoeff() > Scalar(1e-9)) {
      throw StructureViolation("se23 vee: matrix is not in the algebra");
    }
    Vector9 u;
    u.template segment<3>(0) = SO3Type::vee(top);
    u.template segment<3>(3) = m.template block<3, 1>(0, 3);
    u.template segment<3>(6) = m.template block<3, 1>(0, 4);
    return u;
  }

  /// Group exponential, exp(u) = (exp(omega), J_l(omega) nu, J_l(omega) alpha).
  static SE23 exp(const Vector9& u) {
    const Vector3 omega = u.template segment<3>(0);
    const Matrix3 jl = SO3Type::leftJacobian(omega);
    return SE23(SO3Type::exp(omega), jl * u.template segment<3>(3),
                jl * u.template segment<3>(6));
  }

  /**
   * @brief Group logarithm, inverse of exp.
   * @throws AngleNearPi for rotation angles at the chart boundary
   */
  static Vector9 log(const SE23& x) {
    const Vector3 omega = SO3Type::log(x.r_);
    const Matrix3 jl_inv = SO3Type::leftJacobianInverse(omega);
    Vector9 u;
    u.template segment<3>(0) = omega;
    u.template segment<3>(3) = jl_inv * x.p_;
    u.template segment<3>(6) = jl_inv * x.v_;
    return u;
  }

  /// adjoint matrix: adM(u) v = vee([wedge(u), wedge(v)]).
  static Matrix9 adjoint(const Vector9& u) {
    const Matrix3 wo = SO3Type::wedge(u.template segment<3>(0));
    Matrix9 ad = Matrix9::Zero();
    ad.template block<3, 3>(0, 0) = wo;
    ad.template block<3, 3>(3, 3) = wo;
    ad.template block<3, 3>(6, 6) = wo;
    ad.template block<3, 3>(3, 0) = SO3Type::wedge(u.template segment<3>(3));
    ad.template block<3, 3>(6, 0) = SO3Type::wedge(u.template segment<3>(6));
    return ad;
  }

  /// 9x9 left Jacobian, J_l(u) = sum_k adM(u)^k / (k+1)!, computed by a
  /// scaled series so large arguments stay accurate. Satisfies
  /// exp(u + d) = exp(wedge(J_l(u) d)) exp(u) to first order.
  static Matrix9 leftJacobian(const Vector9& u) {
    const Matrix9 ad = adjoint(u);
    int halvings = 0;
    Scalar norm = ad.template lpNorm<1>();
    while (norm > Scalar(0.5) && halvings < 60) {
      norm *= Scalar(0.5);
      ++halvings;
    }
    const Matrix9 ads = ad / std::ldexp(Scalar(1), halvings);
    Matrix9 exp_ads = Matrix9::Identity();
    Matrix9 jac = Matrix9::Identity();
    Matrix9 term = Matrix9::Identity();
    for (int k = 1; k <= 24; ++k) {
      term = (term * ads / Scalar(k)).eval();
      exp_ads += term;
      jac += term / Scalar(k + 1);
      if (term.template lpNorm<1>() < Scalar(1e-18)) break;
    }
    // J(2m) = (I + exp(adM(m))) J(m) / 2
    for (int i = 0; i < halvings; ++i) {
      jac = (Scalar(0.5) * (Matrix9::Identity() + exp_ads) * jac).eval();
      exp_ads = (exp_ads * exp_ads).eval();
    }
    return jac;
  }

  /// Adjoint matrix: AdM(X) u = vee(X wedge(u) X^-1).
  Matrix9 Adjoint() const {
    Matrix9 adm = Matrix9::Zero();
    adm.template block<3, 3>(0, 0) = r_;
    adm.template block<3, 3>(3, 3) = r_;
    adm.template block<3, 3>(6, 6) = r_;
    adm.template block<3, 3>(3, 0) = SO3Type::wedge(p_) * r_;
    adm.template block<3, 3>(6, 0) = SO3Type::wedge(v_) * r_;
    return adm;
  }

  SE23 inverse() const {
    const Matrix3 rt = r_.transpose();
    return SE23(rt, -(rt * p_), -(rt * v_));
  }

  SE23 operator*(const SE23& other) const {
    return SE23(r_ * other.r_, r_ * other.p_ + p_, r_ * other.v_ + v_);
  }

  Matrix5 asMatrix() const {
    Matrix5 m = Matrix5::Identity();
    m.template block<3, 3>(0, 0) = r_;
    m.template block<3, 1>(0, 3) = p_;
    m.template block<3, 1>(0, 4) = v_;
    return m;
  }

  const Matrix3& R() const { return r_; }
  const Vector3& p() const { return p_; }
  const Vector3& v() const { return v_; }

  bool isApprox(const SE23& other, Scalar tol) const {
    return (asMatrix() - other.asMatrix()).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  Matrix3 r_;
  Vector3 p_;
  Vector3 v_;
};

using SE23d = SE23<double>;

}  // namespace eqnav
