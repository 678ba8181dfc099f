// Shared test utilities: seeded samplers and independent numeric oracles.
// Oracles here must stay independent of the closed forms they check: the
// exponentials are truncated Taylor series on raw matrices, the flows are
// brute-force RK4.

#pragma once

#include <cstdint>
#include <random>

#include "eqnav/lie/sdp.hpp"
#include "eqnav/lie/se23.hpp"
#include "eqnav/lie/so3.hpp"
#include "eqnav/types.hpp"

namespace eqnav::test {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }

  Vector3d vec3(double amp) {
    return Vector3d(uniform(-amp, amp), uniform(-amp, amp), uniform(-amp, amp));
  }

  Vector9d vec9(double amp) {
    Vector9d v;
    for (int i = 0; i < 9; ++i) v(i) = uniform(-amp, amp);
    return v;
  }

  /// Rotation vector with norm at most max_angle.
  Vector3d rotationVector(double max_angle) {
    Vector3d axis = vec3(1.0);
    while (axis.norm() < 1e-6) axis = vec3(1.0);
    return axis.normalized() * uniform(0.0, max_angle);
  }

  Matrix3d rotation(double max_angle) { return SO3d::exp(rotationVector(max_angle)); }

  SE23d pose(double max_angle = 2.5, double span = 3.0) {
    return SE23d(rotation(max_angle), vec3(span), vec3(span));
  }

  SDPd sdp(double max_angle = 2.5, double span = 3.0, double alg_amp = 1.0) {
    return SDPd(pose(max_angle, span), vec9(alg_amp));
  }

  SDPTangentd sdpTangent(double amp = 1.0) { return SDPTangentd(vec9(amp), vec9(amp)); }

 private:
  std::mt19937_64 eng_;
};

/// Truncated Taylor series for the matrix exponential (default 30 terms).
template <typename Matrix>
Matrix expmSeries(const Matrix& m, int terms = 30) {
  Matrix sum = Matrix::Identity();
  Matrix term = Matrix::Identity();
  for (int k = 1; k <= terms; ++k) {
    term = (term * m / double(k)).eval();
    sum += term;
  }
  return sum;
}

inline double maxAbs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace eqnav::test
