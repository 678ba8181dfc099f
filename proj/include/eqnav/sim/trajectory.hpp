// Ground-truth trajectory generation. Smooth references (a natural cubic
// spline through random waypoints for translation, band-limited sinusoids
// for angular rate) are sampled on the IMU grid and held constant between
// samples; the ground truth is the exact flow of the kinematics under those
// held inputs. Every consumer (IMU model, measurement model, filters) then
// sees one consistent sampled-data system.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "eqnav/lie/se23.hpp"
#include "eqnav/sim/config.hpp"
#include "eqnav/sim/rng.hpp"
#include "eqnav/types.hpp"

namespace eqnav {

struct TrajectorySample {
  double t = 0.0;
  SE23d pose{};
  Vector3d omega = Vector3d::Zero();       // body angular rate over [t, t+dt)
  Vector3d accel_body = Vector3d::Zero();  // specific force over [t, t+dt)
};

namespace detail {

/// Natural cubic spline through uniformly spaced 3d knots.
class CubicSpline3 {
 public:
  CubicSpline3() = default;

  CubicSpline3(std::vector<Vector3d> knots, double t0, double t1)
      : knots_(std::move(knots)), t0_(t0) {
    const int n = int(knots_.size());
    h_ = (t1 - t0) / double(n - 1);
    m_.assign(n, Vector3d::Zero());
    if (n > 2) {
      // Thomas solve of the tridiagonal second-derivative system,
      // natural end conditions m_0 = m_{n-1} = 0
      const int k = n - 2;
      std::vector<double> diag(k, 2.0 * h_ / 3.0);
      std::vector<Vector3d> rhs(k);
      for (int i = 0; i < k; ++i) {
        rhs[i] = (knots_[i + 2] - 2.0 * knots_[i + 1] + knots_[i]) / h_;
      }
      for (int i = 1; i < k; ++i) {
        const double w = (h_ / 6.0) / diag[i - 1];
        diag[i] -= w * h_ / 6.0;
        rhs[i] -= w * rhs[i - 1];
      }
      m_[k] = rhs[k - 1] / diag[k - 1];
      for (int i = k - 1; i >= 1; --i) {
        m_[i] = (rhs[i - 1] - (h_ / 6.0) * m_[i + 1]) / diag[i - 1];
      }
    }
  }

  Vector3d position(double t) const {
    const auto [i, th] = locate(t);
    const double a = 1.0 - th;
    return a * knots_[i] + th * knots_[i + 1] +
           h_ * h_ / 6.0 * ((a * a * a - a) * m_[i] + (th * th * th - th) * m_[i + 1]);
  }

  Vector3d velocity(double t) const {
    const auto [i, th] = locate(t);
    const double a = 1.0 - th;
    return (knots_[i + 1] - knots_[i]) / h_ +
           h_ / 6.0 * ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * th * th - 1.0) * m_[i + 1]);
  }

  Vector3d acceleration(double t) const {
    const auto [i, th] = locate(t);
    return (1.0 - th) * m_[i] + th * m_[i + 1];
  }

 private:
  std::pair<int, double> locate(double t) const {
    const int max_i = int(knots_.size()) - 2;
    double s = (t - t0_) / h_;
    int i = int(std::floor(s));
    if (i < 0) i = 0;
    if (i > max_i) i = max_i;
    return {i, s - double(i)};
  }

  std::vector<Vector3d> knots_;
  double t0_ = 0.0;
  double h_ = 1.0;
  std::vector<Vector3d> m_;
};

}  // namespace detail

/**
 * @brief Sampled-data ground truth over [0, duration].
 *
 * The truth state is integrated on the IMU grid with the held reference
 * inputs; pose(t) for off-grid t flows the bracketing grid state with the
 * same held input, matching how a filter propagates to an asynchronous
 * measurement.
 */
class Trajectory {
 public:
  Trajectory(const SimConfig& cfg, Rng& rng)
      : duration_(cfg.duration), dt_(1.0 / cfg.imu_rate), gravity_(cfg.gravity()) {
    const bool moving = cfg.waypoints > 1;

    std::vector<Vector3d> knots;
    for (int i = 0; i < std::max(cfg.waypoints, 2); ++i) {
      if (moving || i == 0) {
        knots.push_back(
            Vector3d(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)));
      } else {
        knots.push_back(knots.front());  // static: repeat the single waypoint
      }
    }
    const detail::CubicSpline3 spline(std::move(knots), 0.0, duration_);

    // band-limited angular rate reference: three sinusoids per axis
    double amp[3][3], freq[3][3], phase[3][3];
    for (int axis = 0; axis < 3; ++axis) {
      for (int k = 0; k < 3; ++k) {
        amp[axis][k] = moving ? rng.uniform(0.05, 0.3) : 0.0;
        freq[axis][k] = rng.uniform(0.05, 0.4) * 2.0 * std::numbers::pi;
        phase[axis][k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      }
    }
    const auto ref_omega = [&](double t) {
      Vector3d w;
      for (int axis = 0; axis < 3; ++axis) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) {
          s += amp[axis][k] * std::sin(freq[axis][k] * t + phase[axis][k]);
        }
        w(axis) = s;
      }
      return w;
    };

    const Vector3d axis0 = rng.direction();
    Matrix3d r = SO3d::exp(axis0 * rng.uniform(0.0, cfg.att0_max));
    Vector3d p = spline.position(0.0);
    Vector3d v = spline.velocity(0.0);

    const int n = gridSize();
    grid_.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double t = i * dt_;
      TrajectorySample s;
      s.t = t;
      s.pose = SE23d(r, p, v);
      s.omega = ref_omega(t);
      // specific force that realizes the spline acceleration at this attitude
      s.accel_body = r.transpose() * (spline.acceleration(t) - gravity_);
      grid_.push_back(s);
      step(r, p, v, s.omega, s.accel_body, dt_);
    }
  }

  double duration() const { return duration_; }

  /// Held angular rate at time t.
  Vector3d omega(double t) const { return grid_[index(t)].omega; }

  /// Held specific force at time t.
  Vector3d accelBody(double t) const { return grid_[index(t)].accel_body; }

  /// Exact truth pose at any t (grid state flowed with the held input).
  SE23d pose(double t) const {
    const int i = index(t);
    const TrajectorySample& s = grid_[i];
    const double rem = t - s.t;
    if (std::abs(rem) < 1e-12) return s.pose;
    Matrix3d r = s.pose.R();
    Vector3d p = s.pose.p(), v = s.pose.v();
    step(r, p, v, s.omega, s.accel_body, rem);
    return SE23d(r, p, v);
  }

  const std::vector<TrajectorySample>& samples() const { return grid_; }

  int gridSize() const { return int(std::llround(duration_ / dt_)) + 1; }
  double imuPeriod() const { return dt_; }
  const Vector3d& gravity() const { return gravity_; }

 private:
  int index(double t) const {
    int i = int(std::floor(t / dt_ + 1e-9));
    if (i < 0) i = 0;
    if (i >= int(grid_.size())) i = int(grid_.size()) - 1;
    return i;
  }

  // one RK4 step of the kinematics under constant body rates
  void step(Matrix3d& r, Vector3d& p, Vector3d& v, const Vector3d& omega,
            const Vector3d& accel, double h) const {
    const auto rate = [&](const Matrix3d& rm, const Vector3d& vm) {
      return std::make_tuple(Matrix3d(rm * SO3d::wedge(omega)), vm,
                             Vector3d(rm * accel + gravity_));
    };
    const auto [r1, p1, v1] = rate(r, v);
    const auto [r2, p2, v2] = rate(r + 0.5 * h * r1, v + 0.5 * h * v1);
    const auto [r3, p3, v3] = rate(r + 0.5 * h * r2, v + 0.5 * h * v2);
    const auto [r4, p4, v4] = rate(r + h * r3, v + h * v3);
    r = SO3d::project(Matrix3d(r + h / 6.0 * (r1 + 2 * r2 + 2 * r3 + r4)));
    p += h / 6.0 * (p1 + 2 * p2 + 2 * p3 + p4);
    v += h / 6.0 * (v1 + 2 * v2 + 2 * v3 + v4);
  }

  double duration_;
  double dt_;
  Vector3d gravity_;
  std::vector<TrajectorySample> grid_;
};

}  // namespace eqnav
