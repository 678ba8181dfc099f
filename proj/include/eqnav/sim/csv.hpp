// CSV serialization of simulation outputs. Every file carries a header row;
// numbers are printed with %.12g so identical runs produce identical bytes.

#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "eqnav/errors.hpp"
#include "eqnav/sim/runner.hpp"
#include "eqnav/sim/sensors.hpp"
#include "eqnav/sim/trajectory.hpp"

namespace eqnav {

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::ofstream openOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  return out;
}

// quaternion with a deterministic sign convention (w >= 0)
inline Eigen::Vector4d quatOf(const Matrix3d& r) {
  Eigen::Quaterniond q(r);
  if (q.w() < 0) q.coeffs() *= -1.0;
  return Eigen::Vector4d(q.w(), q.x(), q.y(), q.z());
}

inline void writePose(std::ofstream& out, const SE23d& pose) {
  const Eigen::Vector4d q = quatOf(pose.R());
  for (int i = 0; i < 4; ++i) out << ',' << num(q(i));
  for (int i = 0; i < 3; ++i) out << ',' << num(pose.p()(i));
  for (int i = 0; i < 3; ++i) out << ',' << num(pose.v()(i));
}

}  // namespace detail

inline void writeTrajectoryCsv(const std::string& path,
                               const std::vector<TrajectorySample>& samples) {
  auto out = detail::openOut(path);
  out << "t,qw,qx,qy,qz,px,py,pz,vx,vy,vz\n";
  for (const auto& s : samples) {
    out << detail::num(s.t);
    detail::writePose(out, s.pose);
    out << '\n';
  }
}

inline void writeImuCsv(const std::string& path, const std::vector<ImuSample>& imu) {
  auto out = detail::openOut(path);
  out << "t,wx,wy,wz,ax,ay,az\n";
  for (const auto& s : imu) {
    out << detail::num(s.t);
    for (int i = 0; i < 3; ++i) out << ',' << detail::num(s.gyro(i));
    for (int i = 0; i < 3; ++i) out << ',' << detail::num(s.accel(i));
    out << '\n';
  }
}

inline void writeMeasCsv(const std::string& path,
                         const std::vector<Measurement>& meas) {
  auto out = detail::openOut(path);
  out << "t,qw,qx,qy,qz,px,py,pz,vx,vy,vz\n";
  for (const auto& m : meas) {
    out << detail::num(m.t);
    detail::writePose(out, m.pose);
    out << '\n';
  }
}

inline void writeReportCsv(const std::string& path, const RunReport& rep) {
  auto out = detail::openOut(path);
  out << "t,att_err_deg,pos_err_m,vel_err_mps,bw_err,ba_err,lyap\n";
  for (const auto& r : rep.rows) {
    out << detail::num(r.t) << ',' << detail::num(r.att_deg) << ','
        << detail::num(r.pos) << ',' << detail::num(r.vel) << ',' << detail::num(r.bw)
        << ',' << detail::num(r.ba) << ',' << detail::num(r.lyap) << '\n';
  }
}

inline void writeAggregateCsv(const std::string& path, const FilterAggregate& agg) {
  auto out = detail::openOut(path);
  out << "run,phase,att,pos,vel,bw,ba\n";
  const auto row = [&](const std::string& run, const std::string& phase,
                       const Rmse& r) {
    out << run << ',' << phase << ',' << detail::num(r.att_deg) << ','
        << detail::num(r.pos) << ',' << detail::num(r.vel) << ',' << detail::num(r.bw)
        << ',' << detail::num(r.ba) << '\n';
  };
  for (std::size_t i = 0; i < agg.runs.size(); ++i) {
    row(std::to_string(i), "transient", agg.runs[i].transient);
    row(std::to_string(i), "asymptotic", agg.runs[i].asymptotic);
  }
  row("mean", "transient", agg.mean_transient);
  row("mean", "asymptotic", agg.mean_asymptotic);
  row("std", "transient", agg.std_transient);
  row("std", "asymptotic", agg.std_asymptotic);
}

inline void writeSweepCsv(const std::string& path, const SweepResult& sweep) {
  auto out = detail::openOut(path);
  out << "magnitude,filter,converged,init_err,final_err\n";
  for (const auto& r : sweep.rows) {
    out << detail::num(r.magnitude) << ",eqf," << (r.eqf_converged ? 1 : 0) << ','
        << detail::num(r.eqf_init) << ',' << detail::num(r.eqf_final) << '\n';
    out << detail::num(r.magnitude) << ",mekf," << (r.mekf_converged ? 1 : 0) << ','
        << detail::num(r.mekf_init) << ',' << detail::num(r.mekf_final) << '\n';
  }
}

inline void writeTuneCsv(const std::string& path, const TuneResult& tune) {
  auto out = detail::openOut(path);
  out << "tuning,filter,status,att,pos,vel,bw,ba\n";
  for (const auto& r : tune.rows) {
    out << r.tuning << ',' << filterName(r.kind) << ','
        << (r.fail ? "FAIL" : "ok");
    if (r.fail) {
      out << ",,,,,\n";
    } else {
      out << ',' << detail::num(r.transient.att_deg) << ','
          << detail::num(r.transient.pos) << ',' << detail::num(r.transient.vel) << ','
          << detail::num(r.transient.bw) << ',' << detail::num(r.transient.ba) << '\n';
    }
  }
}

}  // namespace eqnav
