// Deterministic random source for the simulation. Gaussians come from a
// hand-rolled Marsaglia polar transform so streams do not depend on the
// standard library's distribution implementations.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "eqnav/types.hpp"

namespace eqnav {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform draw in [0, 1) with 53 random bits.
  double unit() { return double(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * unit() - 1.0;
      v = 2.0 * unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  Vector3d gaussian3() { return Vector3d(gaussian(), gaussian(), gaussian()); }

  /// Uniformly random unit vector.
  Vector3d direction() {
    Vector3d d;
    do {
      d = Vector3d(2 * unit() - 1, 2 * unit() - 1, 2 * unit() - 1);
    } while (d.squaredNorm() < 1e-6 || d.squaredNorm() > 1.0);
    return d.normalized();
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace eqnav
