// Fixed-size Eigen aliases shared across the library.

#pragma once

#include <Eigen/Dense>

namespace eqnav {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vec9 = Eigen::Matrix<Scalar, 9, 1>;
template <typename Scalar>
using Vec18 = Eigen::Matrix<Scalar, 18, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Mat5 = Eigen::Matrix<Scalar, 5, 5>;
template <typename Scalar>
using Mat9 = Eigen::Matrix<Scalar, 9, 9>;
template <typename Scalar>
using Mat18 = Eigen::Matrix<Scalar, 18, 18>;

using Vector3d = Vec3<double>;
using Vector9d = Vec9<double>;
using Vector15d = Eigen::Matrix<double, 15, 1>;
using Vector18d = Vec18<double>;
using Matrix3d = Mat3<double>;
using Matrix5d = Mat5<double>;
using Matrix9d = Mat9<double>;
using Matrix15d = Eigen::Matrix<double, 15, 15>;
using Matrix18d = Mat18<double>;

}  // namespace eqnav
