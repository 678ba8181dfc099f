// Sensor simulation: biased and noisy IMU samples on the IMU grid, extended
// pose measurements at the measurement rate, and the bias ground truth.

#pragma once

#include <vector>

#include "eqnav/model/bins.hpp"
#include "eqnav/sim/config.hpp"
#include "eqnav/sim/rng.hpp"
#include "eqnav/sim/trajectory.hpp"

namespace eqnav {

struct ImuSample {
  double t = 0.0;
  Vector3d gyro = Vector3d::Zero();
  Vector3d accel = Vector3d::Zero();
};

struct BiasSample {
  double t = 0.0;
  Vector3d gyro = Vector3d::Zero();
  Vector3d accel = Vector3d::Zero();
};

struct SensorStreams {
  std::vector<ImuSample> imu;
  std::vector<Measurement> meas;
  std::vector<BiasSample> bias;  // ground truth, aligned with imu
};

/// Truth bias at time t (biases are held on the IMU grid).
inline const BiasSample& biasAt(const SensorStreams& s, double t) {
  int i = int(std::floor(t * (1.0 / (s.bias[1].t - s.bias[0].t)) + 1e-9));
  if (i < 0) i = 0;
  if (i >= int(s.bias.size())) i = int(s.bias.size()) - 1;
  return s.bias[std::size_t(i)];
}

inline SensorStreams simulateSensors(const Trajectory& traj, const SimConfig& cfg,
                                     Rng& rng) {
  SensorStreams out;
  const double dt = traj.imuPeriod();
  const int n = traj.gridSize();

  Vector3d bw = cfg.bias0_gyro * rng.gaussian3();
  Vector3d ba = cfg.bias0_accel * rng.gaussian3();

  out.imu.reserve(n);
  out.bias.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    out.bias.push_back(BiasSample{t, bw, ba});

    ImuSample s;
    s.t = t;
    s.gyro = traj.omega(t) + bw + cfg.sigma_gyro * rng.gaussian3();
    s.accel = traj.accelBody(t) + ba + cfg.sigma_accel * rng.gaussian3();
    out.imu.push_back(s);

    bw += cfg.walk_gyro * std::sqrt(dt) * rng.gaussian3();
    ba += cfg.walk_accel * std::sqrt(dt) * rng.gaussian3();
  }

  Vector9d diag;
  diag << cfg.sigma_att * cfg.sigma_att, cfg.sigma_att * cfg.sigma_att,
      cfg.sigma_att * cfg.sigma_att, cfg.sigma_pos * cfg.sigma_pos,
      cfg.sigma_pos * cfg.sigma_pos, cfg.sigma_pos * cfg.sigma_pos,
      cfg.sigma_vel * cfg.sigma_vel, cfg.sigma_vel * cfg.sigma_vel,
      cfg.sigma_vel * cfg.sigma_vel;
  const Matrix9d noise_cov = diag.asDiagonal();

  const int n_meas = int(std::floor(cfg.duration * cfg.meas_rate));
  out.meas.reserve(n_meas);
  for (int k = 1; k <= n_meas; ++k) {
    const double t = double(k) / cfg.meas_rate;
    if (t > cfg.duration + 1e-9) break;
    out.meas.push_back(sampleMeasurement(traj.pose(t), noise_cov, rng, t));
  }
  return out;
}

}  // namespace eqnav
