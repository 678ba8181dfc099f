// Simulation and filter-gain configuration, plus the flat key = value config
// file format consumed by the command line tool. All values are SI.

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eqnav/errors.hpp"
#include "eqnav/filter/eqf.hpp"
#include "eqnav/filter/mekf.hpp"
#include "eqnav/types.hpp"

namespace eqnav {

struct SimConfig {
  // scenario
  double duration = 120.0;  // s
  double imu_rate = 100.0;  // Hz
  double meas_rate = 30.0;  // Hz
  int waypoints = 8;        // spline control points; 1 = static pose
  double gravity_z = -9.80665;

  // sensor noise (measurement sigmas are per sample)
  double sigma_gyro = 1.3e-2;   // rad/s
  double sigma_accel = 8.3e-2;  // m/s^2
  double sigma_att = 8.7e-2;    // rad
  double sigma_pos = 0.25;      // m
  double sigma_vel = 0.1;       // m/s

  // bias random walk densities and initial bias spread
  double walk_gyro = 1e-4;   // (rad/s)/sqrt(s)
  double walk_accel = 1e-3;  // (m/s^2)/sqrt(s)
  double bias0_gyro = 0.05;  // rad/s
  double bias0_accel = 0.1;  // m/s^2

  // largest initial true attitude angle (rad); filters start at the identity
  double att0_max = 0.6;

  // baseline initialization error (scaled by sweep magnitudes)
  double init_att_err = 0.1745329251994329577;  // rad (10 deg)
  double init_pos_err = 1.0;                    // m
  double init_vel_err = 1.0;                    // m/s
  double init_bias_err = 0.05;

  // filter gains
  double process_virtual = 1e-8;  // PSD floor for the virtual velocity slot
  double walk_virtual = 1e-4;     // process density for the virtual bias slot
  double process_pos_floor = 1e-8;
  double sigma0_att = 0.6;
  double sigma0_pos = 5.0;
  double sigma0_vel = 3.0;
  double sigma0_bias_gyro = 0.1;
  double sigma0_bias_virtual = 0.05;
  double sigma0_bias_accel = 0.2;

  // experiment controls
  double tight_scale = 1e-4;     // tight tuning: P scaled down by this factor
  double tune_inflation = 1e4;   // robust tuning: tight P times this factor
  std::vector<double> sweep_magnitudes = {0.5, 1.0, 2.0, 3.0, 4.0,
                                          5.0, 6.0, 8.0, 10.0, 12.0};

  std::uint64_t seed = 1;

  Vector3d gravity() const { return Vector3d(0.0, 0.0, gravity_z); }

  void validate() const {
    if (duration <= 0) throw ConfigError("duration must be positive");
    if (imu_rate <= 0 || meas_rate <= 0) throw ConfigError("rates must be positive");
    if (meas_rate > imu_rate) {
      throw ConfigError("meas_rate must not exceed imu_rate");
    }
    if (waypoints < 1) throw ConfigError("waypoints must be at least 1");
    for (double s : {sigma_gyro, sigma_accel, sigma_att, sigma_pos, sigma_vel,
                     walk_gyro, walk_accel}) {
      if (s < 0) throw ConfigError("noise sigmas must be non-negative");
    }
    if (sweep_magnitudes.empty()) throw ConfigError("sweep_magnitudes is empty");
    for (std::size_t i = 1; i < sweep_magnitudes.size(); ++i) {
      if (sweep_magnitudes[i] < sweep_magnitudes[i - 1]) {
        throw ConfigError("sweep_magnitudes must be sorted ascending");
      }
    }
  }

  static SimConfig fromFile(const std::string& path);
};

namespace detail {

// The Riccati flow and the innovation covariance need strictly positive
// gains even when the simulated noise is zero (noise-free experiments), so
// the builders floor every variance.
constexpr double kProcessFloor = 1e-12;
constexpr double kOutputFloor = 1e-6;  // (1e-3 units)^2

inline double floored(double v, double floor_value) {
  return v > floor_value ? v : floor_value;
}

}  // namespace detail

/// EqF gains derived from the configured sensor noise. Rates in the bias
/// block use the random-walk densities; the IMU blocks convert the
/// per-sample sigmas into continuous-time densities at the IMU rate.
inline EqfConfig makeEqfConfig(const SimConfig& c) {
  using detail::floored;
  EqfConfig cfg;
  Vector18d p;
  const double qg = floored(c.sigma_gyro * c.sigma_gyro / c.imu_rate,
                            detail::kProcessFloor);
  const double qa = floored(c.sigma_accel * c.sigma_accel / c.imu_rate,
                            detail::kProcessFloor);
  const double wg = floored(c.walk_gyro * c.walk_gyro, detail::kProcessFloor);
  const double wv = floored(c.walk_virtual * c.walk_virtual, detail::kProcessFloor);
  const double wa = floored(c.walk_accel * c.walk_accel, detail::kProcessFloor);
  const double pv = floored(c.process_virtual, detail::kProcessFloor);
  p << qg, qg, qg, pv, pv, pv, qa, qa, qa, wg, wg, wg, wv, wv, wv, wa, wa, wa;
  cfg.P = p.asDiagonal();

  Vector9d q;
  const double q_att = floored(c.sigma_att * c.sigma_att, detail::kOutputFloor);
  const double q_pos = floored(c.sigma_pos * c.sigma_pos, detail::kOutputFloor);
  const double q_vel = floored(c.sigma_vel * c.sigma_vel, detail::kOutputFloor);
  q << q_att, q_att, q_att, q_pos, q_pos, q_pos, q_vel, q_vel, q_vel;
  cfg.Q = q.asDiagonal();

  Vector18d s0;
  s0 << c.sigma0_att, c.sigma0_att, c.sigma0_att, c.sigma0_pos, c.sigma0_pos,
      c.sigma0_pos, c.sigma0_vel, c.sigma0_vel, c.sigma0_vel, c.sigma0_bias_gyro,
      c.sigma0_bias_gyro, c.sigma0_bias_gyro, c.sigma0_bias_virtual,
      c.sigma0_bias_virtual, c.sigma0_bias_virtual, c.sigma0_bias_accel,
      c.sigma0_bias_accel, c.sigma0_bias_accel;
  cfg.Sigma0 = s0.cwiseProduct(s0).asDiagonal();
  return cfg;
}

/// MEKF gains from the same noise figures (15 states, no virtual slots).
inline MekfConfig makeMekfConfig(const SimConfig& c) {
  using detail::floored;
  MekfConfig cfg;
  Vector15d p;
  const double qg = floored(c.sigma_gyro * c.sigma_gyro / c.imu_rate,
                            detail::kProcessFloor);
  const double qa = floored(c.sigma_accel * c.sigma_accel / c.imu_rate,
                            detail::kProcessFloor);
  const double wg = floored(c.walk_gyro * c.walk_gyro, detail::kProcessFloor);
  const double wa = floored(c.walk_accel * c.walk_accel, detail::kProcessFloor);
  const double pp = floored(c.process_pos_floor, detail::kProcessFloor);
  p << qg, qg, qg, pp, pp, pp, qa, qa, qa, wg, wg, wg, wa, wa, wa;
  cfg.P = p.asDiagonal();

  Vector9d q;
  const double q_att = floored(c.sigma_att * c.sigma_att, detail::kOutputFloor);
  const double q_pos = floored(c.sigma_pos * c.sigma_pos, detail::kOutputFloor);
  const double q_vel = floored(c.sigma_vel * c.sigma_vel, detail::kOutputFloor);
  q << q_att, q_att, q_att, q_pos, q_pos, q_pos, q_vel, q_vel, q_vel;
  cfg.Q = q.asDiagonal();

  Vector15d s0;
  s0 << c.sigma0_att, c.sigma0_att, c.sigma0_att, c.sigma0_pos, c.sigma0_pos,
      c.sigma0_pos, c.sigma0_vel, c.sigma0_vel, c.sigma0_vel, c.sigma0_bias_gyro,
      c.sigma0_bias_gyro, c.sigma0_bias_gyro, c.sigma0_bias_accel, c.sigma0_bias_accel,
      c.sigma0_bias_accel;
  cfg.Sigma0 = s0.cwiseProduct(s0).asDiagonal();
  cfg.gravity = c.gravity();
  return cfg;
}

inline SimConfig SimConfig::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  SimConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;  // blank or comment-only line

    std::string eq;
    ls >> eq;
    if (eq != "=") {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }

    const auto number = [&]() {
      double v;
      if (!(ls >> v)) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": bad numeric value for " + key);
      }
      return v;
    };

    if (key == "duration") cfg.duration = number();
    else if (key == "imu_rate") cfg.imu_rate = number();
    else if (key == "meas_rate") cfg.meas_rate = number();
    else if (key == "waypoints") cfg.waypoints = int(number());
    else if (key == "gravity_z") cfg.gravity_z = number();
    else if (key == "sigma_gyro") cfg.sigma_gyro = number();
    else if (key == "sigma_accel") cfg.sigma_accel = number();
    else if (key == "sigma_att") cfg.sigma_att = number();
    else if (key == "sigma_pos") cfg.sigma_pos = number();
    else if (key == "sigma_vel") cfg.sigma_vel = number();
    else if (key == "walk_gyro") cfg.walk_gyro = number();
    else if (key == "walk_accel") cfg.walk_accel = number();
    else if (key == "bias0_gyro") cfg.bias0_gyro = number();
    else if (key == "bias0_accel") cfg.bias0_accel = number();
    else if (key == "att0_max") cfg.att0_max = number();
    else if (key == "init_att_err") cfg.init_att_err = number();
    else if (key == "init_pos_err") cfg.init_pos_err = number();
    else if (key == "init_vel_err") cfg.init_vel_err = number();
    else if (key == "init_bias_err") cfg.init_bias_err = number();
    else if (key == "process_virtual") cfg.process_virtual = number();
    else if (key == "walk_virtual") cfg.walk_virtual = number();
    else if (key == "process_pos_floor") cfg.process_pos_floor = number();
    else if (key == "sigma0_att") cfg.sigma0_att = number();
    else if (key == "sigma0_pos") cfg.sigma0_pos = number();
    else if (key == "sigma0_vel") cfg.sigma0_vel = number();
    else if (key == "sigma0_bias_gyro") cfg.sigma0_bias_gyro = number();
    else if (key == "sigma0_bias_virtual") cfg.sigma0_bias_virtual = number();
    else if (key == "sigma0_bias_accel") cfg.sigma0_bias_accel = number();
    else if (key == "tight_scale") cfg.tight_scale = number();
    else if (key == "tune_inflation") cfg.tune_inflation = number();
    else if (key == "seed") cfg.seed = std::uint64_t(number());
    else if (key == "sweep_magnitudes") {
      cfg.sweep_magnitudes.clear();
      double v;
      while (ls >> v) cfg.sweep_magnitudes.push_back(v);
      if (cfg.sweep_magnitudes.empty()) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": sweep_magnitudes needs at least one value");
      }
    } else {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace eqnav
