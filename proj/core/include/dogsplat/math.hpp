#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace dogsplat {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat23 = Eigen::Matrix<double, 2, 3>;

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Inverse of logistic(); p must lie in (0, 1).
inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// d logistic(x) / dx expressed through the activated value.
inline double logistic_grad(double activated) { return activated * (1.0 - activated); }

}  // namespace dogsplat
