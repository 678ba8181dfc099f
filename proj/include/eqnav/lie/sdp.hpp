// The symmetry group SE_2(3) |x se_2(3): pairs X = (A, a) of a group element
// and an algebra element (kept in R^9 coordinates), with product
// (B, b)(A, a) = (BA, b + AdM(B) a).

#pragma once

#include <cmath>

#include "eqnav/lie/se23.hpp"
#include "eqnav/types.hpp"

namespace eqnav {

/// Tangent of the semi-direct product at the identity, as a pair of
/// 9-vectors. Base-point tangents are carried as (5x5, 9-vector) pairs by
/// SDPVelocity and appear only transiently in integrators.
template <typename Scalar>
struct SDPTangent {
  Vec9<Scalar> w1 = Vec9<Scalar>::Zero();
  Vec9<Scalar> w2 = Vec9<Scalar>::Zero();

  SDPTangent() = default;
  SDPTangent(const Vec9<Scalar>& first, const Vec9<Scalar>& second) : w1(first), w2(second) {}

  SDPTangent operator+(const SDPTangent& o) const { return {w1 + o.w1, w2 + o.w2}; }
  SDPTangent operator-(const SDPTangent& o) const { return {w1 - o.w1, w2 - o.w2}; }
  SDPTangent operator*(Scalar s) const { return {w1 * s, w2 * s}; }
};

/// Tangent at a base point X = (A, a): matrix-valued derivative of the SE23
/// slot plus the coordinate derivative of the algebra slot.
template <typename Scalar>
struct SDPVelocity {
  Mat5<Scalar> dA = Mat5<Scalar>::Zero();
  Vec9<Scalar> da = Vec9<Scalar>::Zero();
};

/**
 * @brief Element of the semi-direct product group SE_2(3) |x se_2(3).
 *
 * @tparam Scalar floating point type
 */
template <typename Scalar>
class SDP {
 public:
  using SE23Type = SE23<Scalar>;
  using Tangent = SDPTangent<Scalar>;
  using Velocity = SDPVelocity<Scalar>;
  using Vector9 = Vec9<Scalar>;
  using Matrix9 = Mat9<Scalar>;

  /// Identity element (I, 0).
  SDP() : a_(Vector9::Zero()) {}

  SDP(const SE23Type& A, const Vector9& a) : A_(A), a_(a) {}

  /// Group product: (B, b)(A, a) = (BA, b + AdM(B) a).
  SDP operator*(const SDP& other) const {
    return SDP(A_ * other.A_, a_ + A_.Adjoint() * other.a_);
  }

  /// Inverse: (A, a)^-1 = (A^-1, -AdM(A^-1) a).
  SDP inverse() const {
    const SE23Type a_inv = A_.inverse();
    return SDP(a_inv, -(a_inv.Adjoint() * a_));
  }

  /// Differential of left translation: dL_X [w1, w2] = (A w1^, AdM(A) w2).
  Velocity dLeft(const Tangent& w) const {
    Velocity out;
    out.dA = A_.asMatrix() * SE23Type::wedge(w.w1);
    out.da = A_.Adjoint() * w.w2;
    return out;
  }

  /// Differential of right translation: dR_X [w1, w2] = (w1^ A, w2 + adM(w1) a).
  Velocity dRight(const Tangent& w) const {
    Velocity out;
    out.dA = SE23Type::wedge(w.w1) * A_.asMatrix();
    out.da = w.w2 + SE23Type::adjoint(w.w1) * a_;
    return out;
  }

  /// Group Adjoint, equal to dL_X dR_{X^-1}:
  /// Ad_X [u1, u2] = (AdM(A) u1, AdM(A) u2 - adM(AdM(A) u1) a).
  Tangent Adjoint(const Tangent& u) const {
    const Matrix9 adm = A_.Adjoint();
    const Vector9 u1 = adm * u.w1;
    return Tangent(u1, adm * u.w2 - SE23Type::adjoint(u1) * a_);
  }

  /**
   * @brief Time-1 flow of the right-translated field X' = dR_X [u] from the
   * identity. The algebra slot integrates exp(s adM(u1)) over [0, 1], which
   * is the SE_2(3) left Jacobian of u1.
   */
  static SDP exp(const Tangent& u) {
    return SDP(SE23Type::exp(u.w1), SE23Type::leftJacobian(u.w1) * u.w2);
  }

  const SE23Type& A() const { return A_; }
  const Vector9& a() const { return a_; }

  bool isApprox(const SDP& other, Scalar tol) const {
    return A_.isApprox(other.A_, tol) && (a_ - other.a_).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  SE23Type A_;
  Vector9 a_;
};

using SDPTangentd = SDPTangent<double>;
using SDPVelocityd = SDPVelocity<double>;
using SDPd = SDP<double>;

}  // namespace eqnav
