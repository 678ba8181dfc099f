// Central-difference differentiation along caller-supplied curves. The
// retraction (vector shift, group multiplication, ...) lives in the lambda,
// so the same helper serves flat spaces and manifolds.

#pragma once

#include <Eigen/Dense>

namespace eqnav {

/**
 * @brief Central difference (f(h) - f(-h)) / 2h of a curve at 0.
 *
 * The curve must return a type supporting subtraction and scalar division
 * (Eigen matrices and vectors qualify).
 */
template <typename Curve>
auto centralDifference(Curve&& curve, double h = 1e-6) {
  return ((curve(h) - curve(-h)) / (2.0 * h)).eval();
}

/**
 * @brief Jacobian of a map R^n -> R^m by columnwise central differences.
 *
 * Dimensions come from the fixed-size result type: MatrixType is m x n,
 * f maps an n-vector perturbation around zero to an m-vector.
 */
template <typename MatrixType, typename F>
MatrixType numericJacobian(F&& f, double h = 1e-6) {
  using InputVec = Eigen::Matrix<double, MatrixType::ColsAtCompileTime, 1>;
  MatrixType jac;
  for (int j = 0; j < MatrixType::ColsAtCompileTime; ++j) {
    jac.col(j) = centralDifference(
        [&](double s) {
          InputVec x = InputVec::Zero();
          x(j) = s;
          return f(x);
        },
        h);
  }
  return jac;
}

}  // namespace eqnav
