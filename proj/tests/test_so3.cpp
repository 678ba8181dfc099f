#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "eqnav/lie/numdiff.hpp"
#include "eqnav/lie/so3.hpp"
#include "helpers.hpp"

using namespace eqnav;
using test::expmSeries;
using test::maxAbs;
using test::Sampler;

TEST_CASE("so3 exp basics") {
  CHECK(maxAbs(SO3d::exp(Vector3d::Zero()) - Matrix3d::Identity()) == 0.0);

  // quarter turn about x maps e_y to e_z
  const Matrix3d r = SO3d::exp(Vector3d(std::numbers::pi / 2, 0, 0));
  CHECK(maxAbs(r * Vector3d(0, 1, 0) - Vector3d(0, 0, 1)) < 1e-12);
}

TEST_CASE("so3 exp matches series oracle") {
  Sampler rng(101);
  for (int i = 0; i < 500; ++i) {
    const Vector3d w = rng.rotationVector(std::numbers::pi);
    CHECK(maxAbs(SO3d::exp(w) - expmSeries(Matrix3d(SO3d::wedge(w)))) < 1e-12);
  }
  // small-angle branch
  const Vector3d tiny(3e-7, -2e-7, 1e-7);
  CHECK(maxAbs(SO3d::exp(tiny) - expmSeries(Matrix3d(SO3d::wedge(tiny)))) < 1e-15);
}

TEST_CASE("so3 log") {
  CHECK(SO3d::log(Matrix3d::Identity()).norm() == 0.0);

  Sampler rng(102);
  for (int i = 0; i < 500; ++i) {
    const Vector3d v = rng.rotationVector(3.0);
    CHECK(maxAbs(SO3d::log(SO3d::exp(v)) - v) < 1e-9);
  }

  SECTION("angle near pi is rejected") {
    const Matrix3d r = SO3d::exp(Vector3d(std::numbers::pi - 1e-10, 0, 0));
    CHECK_THROWS_AS(SO3d::log(r), AngleNearPi);
  }

  SECTION("round trip survives up to the guard") {
    const Matrix3d r = SO3d::exp(Vector3d(0, std::numbers::pi - 0.1, 0));
    CHECK(maxAbs(SO3d::exp(SO3d::log(r)) - r) < 1e-9);
  }
}

TEST_CASE("so3 left Jacobian matches its series") {
  Sampler rng(103);
  for (int i = 0; i < 200; ++i) {
    const Vector3d w = rng.rotationVector(3.0);
    const Matrix3d wx = SO3d::wedge(w);
    // sum_k wedge^k / (k+1)!
    Matrix3d series = Matrix3d::Identity();
    Matrix3d term = Matrix3d::Identity();
    double fact = 1.0;
    for (int k = 1; k <= 30; ++k) {
      term = (term * wx).eval();
      fact *= double(k + 1);
      series += term / fact;
    }
    CHECK(maxAbs(SO3d::leftJacobian(w) - series) < 1e-12);
    CHECK(maxAbs(SO3d::leftJacobianInverse(w) * SO3d::leftJacobian(w) -
                 Matrix3d::Identity()) < 1e-11);
  }
}

TEST_CASE("so3 project recovers orthonormality") {
  Sampler rng(104);
  for (int i = 0; i < 50; ++i) {
    Matrix3d noisy = rng.rotation(3.0);
    noisy += 1e-4 * Matrix3d::Random();
    const Matrix3d r = SO3d::project(noisy);
    CHECK(SO3d::isRotation(r, 1e-12));
  }
}

TEST_CASE("central difference helper") {
  SECTION("identity map returns the direction") {
    const Vector3d dir(0.3, -0.2, 0.7);
    const Vector3d base(1, 2, 3);
    const Vector3d d =
        centralDifference([&](double h) { return Vector3d(base + h * dir); });
    CHECK(maxAbs(d - dir) < 1e-9);
  }

  SECTION("derivative of so3 exp at zero is wedge") {
    const Vector3d e1(1, 0, 0);
    const Matrix3d d =
        centralDifference([&](double h) { return Matrix3d(SO3d::exp(h * e1)); });
    CHECK(maxAbs(d - SO3d::wedge(e1)) < 1e-10);
  }
}
