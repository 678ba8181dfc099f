#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "eqnav/sim/csv.hpp"
#include "eqnav/sim/runner.hpp"
#include "helpers.hpp"

using namespace eqnav;
using test::maxAbs;

namespace {

SimConfig shortConfig() {
  SimConfig cfg;
  cfg.duration = 20.0;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("trajectory generation") {
  SECTION("static configuration holds a constant pose") {
    SimConfig cfg = shortConfig();
    cfg.waypoints = 1;
    Rng rng(3);
    const Trajectory traj(cfg, rng);
    const auto samples = traj.samples();

    const SE23d first = samples.front().pose;
    for (std::size_t i = 0; i < samples.size(); i += 100) {
      CHECK(samples[i].pose.isApprox(first, 1e-12));
      CHECK(maxAbs(samples[i].omega) == 0.0);
      CHECK(maxAbs(samples[i].accel_body - first.R().transpose() * (-cfg.gravity())) <
            1e-12);
    }
  }

  SECTION("finite differences of position match velocity") {
    SimConfig cfg = shortConfig();
    Rng rng(4);
    const Trajectory traj(cfg, rng);
    const auto samples = traj.samples();
    const double dt = traj.imuPeriod();
    for (std::size_t i = 1; i + 1 < samples.size(); i += 7) {
      const Vector3d v_num =
          (samples[i + 1].pose.p() - samples[i - 1].pose.p()) / (2.0 * dt);
      CHECK(maxAbs(v_num - samples[i].pose.v()) < 1e-3);
    }
  }

  SECTION("velocity increments realize the held specific force") {
    SimConfig cfg = shortConfig();
    Rng rng(5);
    const Trajectory traj(cfg, rng);
    const auto samples = traj.samples();
    const double dt = traj.imuPeriod();
    // forward difference of v against the held input mapped through the
    // midpoint attitude (the rate is held on [t, t+dt))
    for (std::size_t i = 0; i + 1 < samples.size(); i += 11) {
      const Vector3d a_num = (samples[i + 1].pose.v() - samples[i].pose.v()) / dt;
      const Vector3d a_model =
          traj.pose(samples[i].t + 0.5 * dt).R() * samples[i].accel_body +
          cfg.gravity();
      CHECK(maxAbs(a_num - a_model) < 1e-3);
    }
  }

  SECTION("same seed reproduces the trajectory") {
    SimConfig cfg = shortConfig();
    Rng rng1(9), rng2(9);
    const auto s1 = Trajectory(cfg, rng1).samples();
    const auto s2 = Trajectory(cfg, rng2).samples();
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); i += 13) {
      CHECK(maxAbs(s1[i].pose.asMatrix() - s2[i].pose.asMatrix()) == 0.0);
      CHECK(maxAbs(s1[i].omega - s2[i].omega) == 0.0);
    }
  }

  SECTION("off-grid pose queries are consistent with the grid") {
    SimConfig cfg = shortConfig();
    Rng rng(6);
    const Trajectory traj(cfg, rng);
    // a measurement-rate instant that does not hit the 100 Hz grid
    const double t = 7.0 / 30.0;
    const SE23d interp = traj.pose(t);
    CHECK(SO3d::isRotation(interp.R(), 1e-9));
    const auto samples = traj.samples();
    const int i = int(t * cfg.imu_rate);
    CHECK((interp.p() - samples[i].pose.p()).norm() <
          samples[i].pose.v().norm() * 0.02 + 1e-6);
  }
}

TEST_CASE("sensor simulation") {
  SECTION("zero noise gives exact measurements and constant biases") {
    SimConfig cfg = shortConfig();
    cfg.sigma_gyro = cfg.sigma_accel = 0.0;
    cfg.sigma_att = cfg.sigma_pos = cfg.sigma_vel = 0.0;
    cfg.walk_gyro = cfg.walk_accel = 0.0;
    Rng rng(11);
    const Trajectory traj(cfg, rng);
    const SensorStreams streams = simulateSensors(traj, cfg, rng);

    CHECK(maxAbs(streams.bias.front().gyro - streams.bias.back().gyro) == 0.0);
    CHECK(maxAbs(streams.bias.front().accel - streams.bias.back().accel) == 0.0);

    for (std::size_t k = 0; k < streams.meas.size(); k += 50) {
      const auto& m = streams.meas[k];
      CHECK(m.pose.isApprox(traj.pose(m.t), 1e-12));
    }
    for (std::size_t i = 0; i < streams.imu.size(); i += 200) {
      const auto& s = streams.imu[i];
      CHECK(maxAbs(s.gyro - (traj.omega(s.t) + streams.bias.front().gyro)) < 1e-12);
    }
  }

  SECTION("gyro noise has the configured standard deviation") {
    SimConfig cfg = shortConfig();
    cfg.duration = 100.0;  // 10^4 IMU samples
    cfg.walk_gyro = cfg.walk_accel = 0.0;
    Rng rng(12);
    const Trajectory traj(cfg, rng);
    const SensorStreams streams = simulateSensors(traj, cfg, rng);

    double acc = 0.0;
    std::size_t n = 0;
    for (const auto& s : streams.imu) {
      const Vector3d noise = s.gyro - traj.omega(s.t) - streams.bias.front().gyro;
      acc += noise.squaredNorm();
      n += 3;
    }
    const double sigma_hat = std::sqrt(acc / double(n));
    CHECK(std::abs(sigma_hat - cfg.sigma_gyro) < 0.05 * cfg.sigma_gyro);
  }

  SECTION("bias random-walk variance grows linearly in time") {
    SimConfig cfg;
    cfg.duration = 40.0;
    cfg.waypoints = 1;
    cfg.bias0_gyro = cfg.bias0_accel = 0.0;
    cfg.sigma_gyro = cfg.sigma_accel = 0.0;
    cfg.sigma_att = cfg.sigma_pos = cfg.sigma_vel = 0.0;

    const int ensemble = 100;
    std::vector<SensorStreams> walks;
    walks.reserve(ensemble);
    for (int e = 0; e < ensemble; ++e) {
      SimConfig c = cfg;
      c.seed = 1000 + std::uint64_t(e);
      Rng rng(c.seed);
      const Trajectory traj(c, rng);
      walks.push_back(simulateSensors(traj, c, rng));
    }

    // averaged over axes and several checkpoints, var(b(t)) / (walk^2 t) -> 1
    double ratio_acc = 0.0;
    int ratio_n = 0;
    for (double t : {10.0, 20.0, 30.0, 40.0}) {
      const std::size_t idx =
          std::min(std::size_t(t * cfg.imu_rate), walks[0].bias.size() - 1);
      double var = 0.0;
      for (const auto& w : walks) var += w.bias[idx].gyro.squaredNorm();
      var /= double(ensemble * 3);
      ratio_acc += var / (cfg.walk_gyro * cfg.walk_gyro * t);
      ++ratio_n;
    }
    CHECK(std::abs(ratio_acc / ratio_n - 1.0) < 0.1);
  }
}

TEST_CASE("single filter runs") {
  SECTION("noise-free run with exact initialization stays at the truth") {
    SimConfig cfg = shortConfig();
    cfg.sigma_gyro = cfg.sigma_accel = 0.0;
    cfg.sigma_att = cfg.sigma_pos = cfg.sigma_vel = 0.0;
    cfg.walk_gyro = cfg.walk_accel = 0.0;
    Rng rng(cfg.seed);
    const Trajectory traj(cfg, rng);
    const SensorStreams streams = simulateSensors(traj, cfg, rng);

    RunOptions opt;
    opt.init = RunOptions::Init::Exact;
    const RunReport rep = runFilter(FilterKind::Eqf, traj, streams, cfg, opt);

    CHECK_FALSE(rep.diverged);
    CHECK(rep.transient.att_deg < 1e-5);
    CHECK(rep.transient.pos < 1e-5);
    CHECK(rep.transient.vel < 1e-5);
    CHECK(rep.transient.bw < 1e-5);
    CHECK(rep.transient.ba < 1e-5);
  }

  SECTION("noise-free run with wrong initialization converges") {
    SimConfig cfg = shortConfig();
    cfg.sigma_gyro = cfg.sigma_accel = 0.0;
    cfg.sigma_att = cfg.sigma_pos = cfg.sigma_vel = 0.0;
    cfg.walk_gyro = cfg.walk_accel = 0.0;
    Rng rng(cfg.seed);
    const Trajectory traj(cfg, rng);
    const SensorStreams streams = simulateSensors(traj, cfg, rng);

    const RunReport rep = runFilter(FilterKind::Eqf, traj, streams, cfg);
    CHECK_FALSE(rep.diverged);
    CHECK(rep.final_err < 1e-2 * rep.init_err);

    // log-linear decay of the error across updates
    REQUIRE(rep.update_eps.size() > 10);
    const auto& eps = rep.update_eps;
    const auto& ts = rep.update_t;
    const double n = double(eps.size());
    double mean_t = 0.0, mean_l = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      mean_t += ts[i];
      mean_l += std::log(std::max(eps[i], 1e-300));
    }
    mean_t /= n;
    mean_l /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      num += (ts[i] - mean_t) * (std::log(std::max(eps[i], 1e-300)) - mean_l);
      den += (ts[i] - mean_t) * (ts[i] - mean_t);
    }
    CHECK(num / den < 0.0);
  }

  SECTION("identical seeds give identical reports") {
    SimConfig cfg = shortConfig();
    cfg.duration = 10.0;
    Rng rng1(cfg.seed);
    const Trajectory t1(cfg, rng1);
    const SensorStreams s1 = simulateSensors(t1, cfg, rng1);
    Rng rng2(cfg.seed);
    const Trajectory t2(cfg, rng2);
    const SensorStreams s2 = simulateSensors(t2, cfg, rng2);

    const RunReport r1 = runFilter(FilterKind::Mekf, t1, s1, cfg);
    const RunReport r2 = runFilter(FilterKind::Mekf, t2, s2, cfg);
    REQUIRE(r1.rows.size() == r2.rows.size());
    for (std::size_t i = 0; i < r1.rows.size(); i += 37) {
      CHECK(r1.rows[i].att_deg == r2.rows[i].att_deg);
      CHECK(r1.rows[i].pos == r2.rows[i].pos);
      CHECK(r1.rows[i].lyap == r2.rows[i].lyap);
    }
  }
}

TEST_CASE("monte carlo aggregation") {
  SimConfig cfg = shortConfig();
  cfg.duration = 8.0;
  const MonteCarloResult mc = monteCarlo(cfg, 3);

  REQUIRE(mc.eqf.runs.size() == 3);
  REQUIRE(mc.mekf.runs.size() == 3);

  SECTION("aggregate mean is the arithmetic mean of runs") {
    double mean = 0.0;
    for (const auto& r : mc.eqf.runs) mean += r.transient.att_deg;
    mean /= 3.0;
    CHECK(std::abs(mc.eqf.mean_transient.att_deg - mean) < 1e-12);
  }

  SECTION("single-run campaign equals a direct run") {
    const MonteCarloResult one = monteCarlo(cfg, 1);
    SimConfig c = cfg;
    Rng rng(c.seed);
    const Trajectory traj(c, rng);
    const SensorStreams streams = simulateSensors(traj, c, rng);
    const RunReport direct = runFilter(FilterKind::Eqf, traj, streams, c);
    CHECK(one.eqf.runs[0].transient.att_deg == direct.transient.att_deg);
    CHECK(one.eqf.runs[0].final_err == direct.final_err);
    CHECK(one.eqf.mean_transient.att_deg == direct.transient.att_deg);
  }
}

TEST_CASE("initialization sweep basics") {
  SimConfig cfg = shortConfig();
  cfg.duration = 10.0;
  const SweepResult sweep = initErrorSweep(cfg, {0.1, 0.5});
  REQUIRE(sweep.rows.size() == 2);
  CHECK(sweep.rows[0].eqf_converged);
  CHECK(sweep.rows[0].mekf_converged);
  CHECK(sweep.rows[0].eqf_init < sweep.rows[1].eqf_init);
}

TEST_CASE("tuning experiment schema") {
  SimConfig cfg = shortConfig();
  cfg.duration = 10.0;

  SECTION("degenerate inflation gives identical tunings") {
    SimConfig c = cfg;
    c.tune_inflation = 1.0;
    const TuneResult tune = tuningExperiment(c);
    REQUIRE(tune.rows.size() == 4);
    CHECK(tune.rows[0].transient.att_deg == tune.rows[2].transient.att_deg);
    CHECK(tune.rows[1].transient.att_deg == tune.rows[3].transient.att_deg);
  }

  SECTION("rows are emitted for all cases and the EqF completes") {
    const TuneResult tune = tuningExperiment(cfg);
    REQUIRE(tune.rows.size() == 4);
    for (const auto& row : tune.rows) {
      if (row.kind == FilterKind::Eqf) CHECK_FALSE(row.fail);
    }
  }
}
