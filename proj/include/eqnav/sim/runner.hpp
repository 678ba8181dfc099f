// Experiment engine: drives a filter through simulated sensor streams by
// timestamp order (IMU held between samples), records ground-truth errors
// and the Lyapunov trace, and implements the Monte-Carlo, initialization
// sweep and tuning comparisons.

#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "eqnav/errors.hpp"
#include "eqnav/filter/eqf.hpp"
#include "eqnav/filter/mekf.hpp"
#include "eqnav/sim/config.hpp"
#include "eqnav/sim/sensors.hpp"
#include "eqnav/sim/trajectory.hpp"

namespace eqnav {

enum class FilterKind { Eqf, Mekf };

inline const char* filterName(FilterKind k) {
  return k == FilterKind::Eqf ? "eqf" : "mekf";
}

struct ReportRow {
  double t = 0.0;
  double att_deg = 0.0;
  double pos = 0.0;
  double vel = 0.0;
  double bw = 0.0;
  double ba = 0.0;
  double lyap = 0.0;
};

struct Rmse {
  double att_deg = 0.0;
  double pos = 0.0;
  double vel = 0.0;
  double bw = 0.0;
  double ba = 0.0;
};

struct RunReport {
  std::vector<ReportRow> rows;
  Rmse transient;
  Rmse asymptotic;
  bool diverged = false;
  double init_err = 0.0;   // filter error-chart norm at start
  double final_err = 0.0;  // ... at the last recorded instant
  std::vector<double> update_t;
  std::vector<double> update_eps;
  std::vector<double> update_lyap;
};

struct RunOptions {
  enum class Init { Identity, Offset, Exact };
  Init init = Init::Identity;

  // offsets applied to the true initial state when init == Offset
  Vector3d att_offset = Vector3d::Zero();  // rotation vector
  Vector3d pos_offset = Vector3d::Zero();
  Vector3d vel_offset = Vector3d::Zero();
  Vector3d bw_offset = Vector3d::Zero();
  Vector3d bv_offset = Vector3d::Zero();
  Vector3d ba_offset = Vector3d::Zero();

  double sigma0_scale = 1.0;  // standard-deviation scale on Sigma0
  std::optional<EqfConfig> eqf_gains;
  std::optional<MekfConfig> mekf_gains;
};

namespace detail {

inline double rotationAngle(const Matrix3d& r) {
  return std::acos(std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0));
}

inline double rmseOf(const std::vector<double>& sq, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return 0.0;
  double acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) acc += sq[i];
  return std::sqrt(acc / double(hi - lo));
}

// Window RMSEs over the first and last 40 s of the run.
inline void fillRmse(RunReport& rep, double duration) {
  const double t_window = 40.0;
  const auto& rows = rep.rows;
  const auto rmse = [&rows](auto pick, double lo, double hi) {
    double acc = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (r.t >= lo && r.t < hi) {
        acc += pick(r) * pick(r);
        ++n;
      }
    }
    return n ? std::sqrt(acc / double(n)) : std::numeric_limits<double>::quiet_NaN();
  };
  const auto fill = [&](Rmse& out, double lo, double hi) {
    out.att_deg = rmse([](const ReportRow& r) { return r.att_deg; }, lo, hi);
    out.pos = rmse([](const ReportRow& r) { return r.pos; }, lo, hi);
    out.vel = rmse([](const ReportRow& r) { return r.vel; }, lo, hi);
    out.bw = rmse([](const ReportRow& r) { return r.bw; }, lo, hi);
    out.ba = rmse([](const ReportRow& r) { return r.ba; }, lo, hi);
  };
  fill(rep.transient, 0.0, std::min(t_window, duration));
  fill(rep.asymptotic, std::max(0.0, duration - t_window),
       duration + 1.0);
}

}  // namespace detail

/**
 * @brief Run one filter over one simulated scenario.
 *
 * Events are processed in time order; the last IMU sample is held constant
 * between samples (zero-order hold), measurements trigger discrete updates.
 * Divergence (non-finite state, residual outside the chart) sets the
 * diverged flag instead of propagating the exception.
 */
inline RunReport runFilter(FilterKind kind, const Trajectory& traj,
                           const SensorStreams& streams, const SimConfig& cfg,
                           const RunOptions& opt = RunOptions{}) {
  RunReport rep;

  EqfConfig eqf_cfg = opt.eqf_gains ? *opt.eqf_gains : makeEqfConfig(cfg);
  MekfConfig mekf_cfg = opt.mekf_gains ? *opt.mekf_gains : makeMekfConfig(cfg);
  eqf_cfg.Sigma0 *= opt.sigma0_scale * opt.sigma0_scale;
  mekf_cfg.Sigma0 *= opt.sigma0_scale * opt.sigma0_scale;

  EqFilter eqf(eqf_cfg);
  Mekf mekf(mekf_cfg);

  // initial truth
  const SE23d pose0 = traj.pose(0.0);
  const BiasSample& b0 = streams.bias.front();

  if (opt.init != RunOptions::Init::Identity) {
    Matrix3d r = pose0.R();
    Vector3d p = pose0.p(), v = pose0.v();
    Vector3d bw = b0.gyro, bv = Vector3d::Zero(), ba = b0.accel;
    if (opt.init == RunOptions::Init::Offset) {
      r = r * SO3d::exp(opt.att_offset);
      p += opt.pos_offset;
      v += opt.vel_offset;
      bw += opt.bw_offset;
      bv += opt.bv_offset;
      ba += opt.ba_offset;
    }
    if (kind == FilterKind::Eqf) {
      Vector9d bias;
      bias << bw, bv, ba;
      eqf.setEstimate(SystemState{SE23d(r, p, v), bias});
    } else {
      mekf.setEstimate(r, p, v, bw, ba);
    }
  }

  // error-chart coordinates against the truth; throws near the chart edge
  const auto epsNorm = [&](double t) {
    const BiasSample& bias = biasAt(streams, t);
    if (kind == FilterKind::Eqf) {
      Vector9d b;
      b << bias.gyro, Vector3d::Zero(), bias.accel;
      const SystemState truth{traj.pose(t), b};
      const SystemState e = stateAction(eqf.state().inverse(), truth);
      Vector18d eps;
      eps.head<9>() = SE23d::log(e.pose);
      eps.tail<9>() = e.bias;
      const double lyap = eps.dot(eqf.covariance().llt().solve(eps));
      return std::make_pair(eps.norm(), lyap);
    }
    const SE23d truth = traj.pose(t);
    Vector15d e;
    e.segment<3>(0) = SO3d::log(Matrix3d(mekf.R().transpose() * truth.R()));
    e.segment<3>(3) = truth.p() - mekf.p();
    e.segment<3>(6) = truth.v() - mekf.v();
    e.segment<3>(9) = bias.gyro - mekf.gyroBias();
    e.segment<3>(12) = bias.accel - mekf.accelBias();
    const double lyap = e.dot(mekf.covariance().llt().solve(e));
    return std::make_pair(e.norm(), lyap);
  };

  const auto record = [&](double t) {
    const SE23d truth = traj.pose(t);
    const BiasSample& bias = biasAt(streams, t);
    ReportRow row;
    row.t = t;
    double lyap = 0.0;
    try {
      lyap = epsNorm(t).second;
    } catch (const EqnavError&) {
      lyap = std::numeric_limits<double>::quiet_NaN();
    }
    row.lyap = lyap;
    if (kind == FilterKind::Eqf) {
      const SystemState est = eqf.estimate();
      row.att_deg = detail::rotationAngle(Matrix3d(est.pose.R().transpose() *
                                                   truth.R())) *
                    180.0 / M_PI;
      row.pos = (est.pose.p() - truth.p()).norm();
      row.vel = (est.pose.v() - truth.v()).norm();
      row.bw = (est.bias.segment<3>(0) - bias.gyro).norm();
      row.ba = (est.bias.segment<3>(6) - bias.accel).norm();
    } else {
      row.att_deg =
          detail::rotationAngle(Matrix3d(mekf.R().transpose() * truth.R())) * 180.0 /
          M_PI;
      row.pos = (mekf.p() - truth.p()).norm();
      row.vel = (mekf.v() - truth.v()).norm();
      row.bw = (mekf.gyroBias() - bias.gyro).norm();
      row.ba = (mekf.accelBias() - bias.accel).norm();
    }
    rep.rows.push_back(row);
  };

  try {
    rep.init_err = epsNorm(0.0).first;
  } catch (const EqnavError&) {
    rep.init_err = std::numeric_limits<double>::quiet_NaN();
  }

  record(0.0);

  SystemInput held;
  held.gravity = cfg.gravity();
  held.w.segment<3>(0) = streams.imu.front().gyro;
  held.w.segment<3>(6) = streams.imu.front().accel;

  std::size_t i_imu = 1;
  std::size_t i_meas = 0;
  double t_cur = 0.0;
  const double inf = std::numeric_limits<double>::infinity();

  try {
    while (true) {
      const double t_imu = i_imu < streams.imu.size() ? streams.imu[i_imu].t : inf;
      const double t_meas = i_meas < streams.meas.size() ? streams.meas[i_meas].t : inf;
      if (t_imu == inf && t_meas == inf) break;
      const bool imu_event = t_imu <= t_meas;
      const double t_next = imu_event ? t_imu : t_meas;

      if (t_next > t_cur + 1e-12) {
        const double dt = t_next - t_cur;
        if (kind == FilterKind::Eqf) {
          eqf.propagate(held, dt);
        } else {
          mekf.propagate(held.w.segment<3>(0), held.w.segment<3>(6), dt);
        }
        t_cur = t_next;
      }

      if (imu_event) {
        held.w.segment<3>(0) = streams.imu[i_imu].gyro;
        held.w.segment<3>(6) = streams.imu[i_imu].accel;
        ++i_imu;
        record(t_cur);
      } else {
        if (kind == FilterKind::Eqf) {
          eqf.update(streams.meas[i_meas]);
        } else {
          mekf.update(streams.meas[i_meas]);
        }
        const auto [eps, lyap] = epsNorm(t_cur);
        rep.update_t.push_back(t_cur);
        rep.update_eps.push_back(eps);
        rep.update_lyap.push_back(lyap);
        ++i_meas;
      }
    }
    rep.final_err = epsNorm(t_cur).first;
  } catch (const EqnavError&) {
    rep.diverged = true;
    rep.final_err = std::numeric_limits<double>::infinity();
  }

  detail::fillRmse(rep, cfg.duration);
  return rep;
}

// ---------------------------------------------------------------------------
// Monte-Carlo campaign
// ---------------------------------------------------------------------------

struct FilterAggregate {
  std::vector<RunReport> runs;
  Rmse mean_transient, std_transient;
  Rmse mean_asymptotic, std_asymptotic;
};

struct MonteCarloResult {
  FilterAggregate eqf;
  FilterAggregate mekf;
};

namespace detail {

inline void aggregate(FilterAggregate& agg) {
  const auto stats = [&](auto pick, bool transient, Rmse& mean, Rmse& stddev,
                         auto assign) {
    double m = 0.0;
    for (const auto& r : agg.runs) m += pick(transient ? r.transient : r.asymptotic);
    m /= double(agg.runs.size());
    double s = 0.0;
    for (const auto& r : agg.runs) {
      const double d = pick(transient ? r.transient : r.asymptotic) - m;
      s += d * d;
    }
    s = agg.runs.size() > 1 ? std::sqrt(s / double(agg.runs.size() - 1)) : 0.0;
    assign(mean, m);
    assign(stddev, s);
  };

  for (bool transient : {true, false}) {
    Rmse& mean = transient ? agg.mean_transient : agg.mean_asymptotic;
    Rmse& stddev = transient ? agg.std_transient : agg.std_asymptotic;
    stats([](const Rmse& r) { return r.att_deg; }, transient, mean, stddev,
          [](Rmse& r, double v) { r.att_deg = v; });
    stats([](const Rmse& r) { return r.pos; }, transient, mean, stddev,
          [](Rmse& r, double v) { r.pos = v; });
    stats([](const Rmse& r) { return r.vel; }, transient, mean, stddev,
          [](Rmse& r, double v) { r.vel = v; });
    stats([](const Rmse& r) { return r.bw; }, transient, mean, stddev,
          [](Rmse& r, double v) { r.bw = v; });
    stats([](const Rmse& r) { return r.ba; }, transient, mean, stddev,
          [](Rmse& r, double v) { r.ba = v; });
  }
}

}  // namespace detail

/// Independent runs with per-run seeds cfg.seed + run index; both filters
/// consume identical streams within each run.
inline MonteCarloResult monteCarlo(const SimConfig& cfg, int n_runs) {
  MonteCarloResult result;
  result.eqf.runs.resize(std::size_t(n_runs));
  result.mekf.runs.resize(std::size_t(n_runs));

  const auto one = [&cfg](int run, RunReport* eqf_out, RunReport* mekf_out) {
    SimConfig c = cfg;
    c.seed = cfg.seed + std::uint64_t(run);
    Rng rng(c.seed);
    const Trajectory traj(c, rng);
    const SensorStreams streams = simulateSensors(traj, c, rng);
    *eqf_out = runFilter(FilterKind::Eqf, traj, streams, c);
    *mekf_out = runFilter(FilterKind::Mekf, traj, streams, c);
  };

  std::vector<std::future<void>> tasks;
  tasks.reserve(std::size_t(n_runs));
  for (int r = 0; r < n_runs; ++r) {
    tasks.push_back(std::async(std::launch::async, one, r, &result.eqf.runs[r],
                               &result.mekf.runs[r]));
  }
  for (auto& t : tasks) t.get();

  detail::aggregate(result.eqf);
  detail::aggregate(result.mekf);
  return result;
}

// ---------------------------------------------------------------------------
// Initialization-error sweep
// ---------------------------------------------------------------------------

struct SweepRow {
  double magnitude = 0.0;
  bool eqf_converged = false;
  bool mekf_converged = false;
  double eqf_init = 0.0, eqf_final = 0.0;
  double mekf_init = 0.0, mekf_final = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Shared noise-free streams, growing initialization error along a fixed
/// random direction, Riccati seed scaled with the error magnitude. Filter
/// gains stay at their nominal (noise-level) values; only the data is clean.
/// Convergence: not diverged and final error below 1e-2 of the initial one.
inline SweepResult initErrorSweep(const SimConfig& cfg,
                                  const std::vector<double>& magnitudes) {
  SimConfig clean = cfg;
  clean.sigma_gyro = clean.sigma_accel = 0.0;
  clean.sigma_att = clean.sigma_pos = clean.sigma_vel = 0.0;
  clean.walk_gyro = clean.walk_accel = 0.0;

  const EqfConfig eqf_gains = makeEqfConfig(cfg);
  const MekfConfig mekf_gains = makeMekfConfig(cfg);

  Rng rng(clean.seed);
  const Trajectory traj(clean, rng);
  const SensorStreams streams = simulateSensors(traj, clean, rng);

  Rng dir_rng(clean.seed ^ 0x5DEECE66DULL);
  const Vector3d att_dir = dir_rng.direction();
  const Vector3d pos_dir = dir_rng.direction();
  const Vector3d vel_dir = dir_rng.direction();
  const Vector3d bw_dir = dir_rng.direction();
  const Vector3d bv_dir = dir_rng.direction();
  const Vector3d ba_dir = dir_rng.direction();

  SweepResult result;
  for (double m : magnitudes) {
    RunOptions opt;
    opt.init = RunOptions::Init::Offset;
    opt.att_offset = m * clean.init_att_err * att_dir;
    opt.pos_offset = m * clean.init_pos_err * pos_dir;
    opt.vel_offset = m * clean.init_vel_err * vel_dir;
    opt.bw_offset = m * clean.init_bias_err * bw_dir;
    opt.bv_offset = m * clean.init_bias_err * bv_dir;
    opt.ba_offset = m * clean.init_bias_err * ba_dir;
    opt.sigma0_scale = std::max(1.0, m);
    opt.eqf_gains = eqf_gains;
    opt.mekf_gains = mekf_gains;

    const RunReport eqf = runFilter(FilterKind::Eqf, traj, streams, clean, opt);
    const RunReport mekf = runFilter(FilterKind::Mekf, traj, streams, clean, opt);

    SweepRow row;
    row.magnitude = m;
    row.eqf_init = eqf.init_err;
    row.eqf_final = eqf.final_err;
    row.mekf_init = mekf.init_err;
    row.mekf_final = mekf.final_err;
    row.eqf_converged = !eqf.diverged && eqf.final_err < 1e-2 * eqf.init_err;
    row.mekf_converged = !mekf.diverged && mekf.final_err < 1e-2 * mekf.init_err;
    result.rows.push_back(row);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Tight-versus-robust tuning comparison
// ---------------------------------------------------------------------------

struct TuneRow {
  std::string tuning;  // "tight" or "robust"
  FilterKind kind = FilterKind::Eqf;
  bool fail = false;
  Rmse transient;
};

struct TuneResult {
  std::vector<TuneRow> rows;
};

/// Noise-free IMU run under a tight state gain and an inflated (robust) one,
/// both filters wrongly initialized at the identity. Output gains stay at
/// their nominal values; the tunings only rescale the state gain P.
inline TuneResult tuningExperiment(const SimConfig& cfg) {
  SimConfig clean = cfg;
  clean.sigma_gyro = clean.sigma_accel = 0.0;
  clean.sigma_att = clean.sigma_pos = clean.sigma_vel = 0.0;
  clean.walk_gyro = clean.walk_accel = 0.0;

  Rng rng(clean.seed);
  const Trajectory traj(clean, rng);
  const SensorStreams streams = simulateSensors(traj, clean, rng);

  TuneResult result;
  for (const bool robust : {false, true}) {
    const double scale =
        clean.tight_scale * (robust ? clean.tune_inflation : 1.0);
    RunOptions opt;
    EqfConfig ec = makeEqfConfig(cfg);  // nominal noise-level gains
    ec.P *= scale;
    MekfConfig mc = makeMekfConfig(cfg);
    mc.P *= scale;
    opt.eqf_gains = ec;
    opt.mekf_gains = mc;

    for (const FilterKind kind : {FilterKind::Eqf, FilterKind::Mekf}) {
      const RunReport rep = runFilter(kind, traj, streams, clean, opt);
      TuneRow row;
      row.tuning = robust ? "robust" : "tight";
      row.kind = kind;
      row.transient = rep.transient;
      row.fail = rep.diverged || !std::isfinite(rep.final_err) ||
                 rep.final_err > rep.init_err;
      result.rows.push_back(row);
    }
  }
  return result;
}

}  // namespace eqnav
