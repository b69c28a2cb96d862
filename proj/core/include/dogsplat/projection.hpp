#pragma once

#include "dogsplat/camera.hpp"
#include "dogsplat/math.hpp"
#include "dogsplat/scene.hpp"

#include <optional>

namespace dogsplat {

/// Screen-space low-pass added to every projected covariance (px^2).
constexpr double kCovarianceDilation = 0.3;

/// Splat extent in standard deviations.
constexpr double kRadiusSigmas = 3.0;

/// Inverse of a 2x2 covariance stored as the upper triangle (a, b, c) of
/// [[a, b], [b, c]].
struct Conic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double det = 0.0;  // determinant of the covariance that was inverted

  Mat2 matrix() const { return (Mat2() << a, b, b, c).finished(); }
  /// d^T conic d
  double quadratic(double dx, double dy) const { return a * dx * dx + 2.0 * b * dx * dy + c * dy * dy; }
};

/// nullopt when det <= 1e-12 (degenerate splat, the caller culls it).
std::optional<Conic> invert_cov(const Mat2& cov2d);

/// Inclusive pixel rectangle.
struct PixelRect {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
  bool empty() const { return x1 < x0 || y1 < y0; }
  bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

struct Splat2D {
  Vec2 mean2d = Vec2::Zero();
  Mat2 cov2d = Mat2::Identity();
  Conic conic;
  std::optional<Mat2> pseudo_cov2d;
  std::optional<Conic> pseudo_conic;
  double depth = 0.0;
  /// ceil(3 sqrt(lambda_max)) of cov2d; widened to cover the pseudo
  /// covariance when the pseudo branch contributes (f_alpha > 0).
  int radius = 0;
  PixelRect rect;       // radius box clipped to the image
  Vec3 cam_point = Vec3::Zero();
};

/// EWA projection of one primitive. nullopt means culled: behind the near
/// plane, a non-invertible covariance, or a footprint outside the image.
std::optional<Splat2D> project(const Camera& camera, const GaussianParams& g, const DoGParams& d);

/// Upstream gradients arriving at a Splat2D. Conic gradients are taken
/// with respect to the full symmetric 2x2 matrix entries.
struct SplatGradient {
  Vec2 mean2d = Vec2::Zero();
  Mat2 conic = Mat2::Zero();
  Mat2 pseudo_conic = Mat2::Zero();
};

/// Gradients of the projection with respect to the geometric latents.
/// `scale_factors` is with respect to the activated factors (f_x, f_y, f_z).
struct ProjectionGradient {
  Vec3 position = Vec3::Zero();
  Vec4 rotation = Vec4::Zero();
  Vec3 log_scales = Vec3::Zero();
  Vec3 scale_factors = Vec3::Zero();
};

ProjectionGradient project_backward(const Camera& camera, const GaussianParams& g, const DoGParams& d,
                                    const Splat2D& splat, const SplatGradient& upstream);

/// Backpropagates dL/dR through R(q / |q|).
Vec4 rotation_backward(const Vec4& q_raw, const Mat3& dR);

}  // namespace dogsplat
