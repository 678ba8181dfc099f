// Symmetry of the biased INS under SE_2(3) |x se_2(3): the state, input and
// output actions, the equivariant lift onto the group algebra, and the
// lifted dynamics driving the filter state.

#pragma once

#include "eqnav/lie/sdp.hpp"
#include "eqnav/model/bins.hpp"

namespace eqnav {

/// Fixed origin: identity pose, zero bias. Its output is the identity pose.
inline SystemState stateOrigin() { return SystemState{}; }

/// State action phi(X, xi) = (T A, AdM(A^-1)(b - a)).
inline SystemState stateAction(const SDPd& x, const SystemState& xi) {
  SystemState out;
  out.pose = xi.pose * x.A();
  out.bias = x.A().inverse().Adjoint() * (xi.bias - x.a());
  return out;
}

/// Input action psi(X, u). The first slot stays inside the wedge image:
/// the drift generator of A^-1 contributes (0, v(A^-1), 0) in coordinates.
inline SystemInput inputAction(const SDPd& x, const SystemInput& u) {
  SystemInput out;
  const SE23d a_inv = x.A().inverse();
  Vector9d drift = Vector9d::Zero();
  drift.segment<3>(3) = a_inv.v();
  const Matrix9d adm_inv = a_inv.Adjoint();
  out.w = adm_inv * (u.w - x.a()) + drift;
  out.gravity = u.gravity;
  out.tau = adm_inv * u.tau;
  return out;
}

/// Output action rho(X, y) = y A.
inline SE23d outputAction(const SDPd& x, const SE23d& y) { return y * x.A(); }

/// Equivariant lift Lambda(xi, u) into the symmetry group algebra:
/// Lambda_1 = (w - b) + AdM(T^-1) g + vee(T^-1 driftGenerator(T)),
/// Lambda_2 = adM(b) Lambda_1 - tau.
inline SDPTangentd lift(const SystemState& xi, const SystemInput& u) {
  const SE23d t_inv = xi.pose.inverse();
  Vector9d drift = Vector9d::Zero();
  drift.segment<3>(3) = t_inv.R() * xi.pose.v();  // vee(T^-1 f(T))
  SDPTangentd lambda;
  lambda.w1 = (u.w - xi.bias) + t_inv.Adjoint() * u.gravityCoords() + drift;
  lambda.w2 = SE23d::adjoint(xi.bias) * lambda.w1 - u.tau;
  return lambda;
}

/// Lifted system kinematics X' = dL_X Lambda(phi(X, xi0), u).
inline SDPVelocityd liftedDynamics(const SDPd& x, const SystemInput& u) {
  return x.dLeft(lift(stateAction(x, stateOrigin()), u));
}

}  // namespace eqnav
