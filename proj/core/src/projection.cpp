#include "dogsplat/projection.hpp"

#include <algorithm>
#include <cmath>

namespace dogsplat {

namespace {

Mat23 projection_jacobian(const Camera& cam, const Vec3& t) {
  const double inv_z = 1.0 / t.z();
  const double inv_z2 = inv_z * inv_z;
  Mat23 J;
  J << cam.fx * inv_z, 0.0, -cam.fx * t.x() * inv_z2,
      0.0, cam.fy * inv_z, -cam.fy * t.y() * inv_z2;
  return J;
}

Mat2 screen_covariance(const Mat23& J, const Mat3& W, const Mat3& cov3d) {
  Mat2 cov = J * (W * cov3d * W.transpose()) * J.transpose();
  cov(0, 0) += kCovarianceDilation;
  cov(1, 1) += kCovarianceDilation;
  return cov;
}

int extent_radius(const Mat2& cov) {
  const double mid = 0.5 * (cov(0, 0) + cov(1, 1));
  const double det = cov.determinant();
  const double lambda_max = mid + std::sqrt(std::max(mid * mid - det, 0.0));
  return static_cast<int>(std::ceil(kRadiusSigmas * std::sqrt(lambda_max)));
}

}  // namespace

std::optional<Conic> invert_cov(const Mat2& cov2d) {
  const double det = cov2d(0, 0) * cov2d(1, 1) - cov2d(0, 1) * cov2d(1, 0);
  if (!(det > 1e-12)) return std::nullopt;
  const double inv = 1.0 / det;
  return Conic{cov2d(1, 1) * inv, -cov2d(0, 1) * inv, cov2d(0, 0) * inv, det};
}

std::optional<Splat2D> project(const Camera& camera, const GaussianParams& g, const DoGParams& d) {
  const Vec3 t = camera.to_camera(g.position);
  if (!(t.z() > camera.near)) return std::nullopt;

  Splat2D s;
  s.cam_point = t;
  s.depth = t.z();
  s.mean2d = Vec2(camera.fx * t.x() / t.z() + camera.cx, camera.fy * t.y() / t.z() + camera.cy);

  const Mat23 J = projection_jacobian(camera, t);
  s.cov2d = screen_covariance(J, camera.rotation, build_covariance(g));
  const auto conic = invert_cov(s.cov2d);
  if (!conic) return std::nullopt;
  s.conic = *conic;
  s.radius = extent_radius(s.cov2d);

  if (d.active) {
    const Mat2 pcov = screen_covariance(J, camera.rotation, build_pseudo_covariance(g, d));
    const auto pconic = invert_cov(pcov);
    if (!pconic) return std::nullopt;
    s.pseudo_cov2d = pcov;
    s.pseudo_conic = *pconic;
    if (d.alpha_factor() > 0.0) s.radius = std::max(s.radius, extent_radius(pcov));
  }

  const double r = s.radius;
  s.rect.x0 = std::max(0, static_cast<int>(std::ceil(s.mean2d.x() - r)));
  s.rect.x1 = std::min(camera.width - 1, static_cast<int>(std::floor(s.mean2d.x() + r)));
  s.rect.y0 = std::max(0, static_cast<int>(std::ceil(s.mean2d.y() - r)));
  s.rect.y1 = std::min(camera.height - 1, static_cast<int>(std::floor(s.mean2d.y() + r)));
  if (s.rect.empty()) return std::nullopt;
  return s;
}

Vec4 rotation_backward(const Vec4& q_raw, const Mat3& G) {
  const double norm = q_raw.norm();
  const Vec4 q = q_raw / norm;
  const double r = q[0], x = q[1], y = q[2], z = q[3];
  Vec4 dq;
  dq[0] = 2.0 * (-z * G(0, 1) + y * G(0, 2) + z * G(1, 0) - x * G(1, 2) - y * G(2, 0) + x * G(2, 1));
  dq[1] = 2.0 * (y * G(0, 1) + z * G(0, 2) + y * G(1, 0) - 2.0 * x * G(1, 1) - r * G(1, 2) + z * G(2, 0) +
                 r * G(2, 1) - 2.0 * x * G(2, 2));
  dq[2] = 2.0 * (-2.0 * y * G(0, 0) + x * G(0, 1) + r * G(0, 2) + x * G(1, 0) + z * G(1, 2) - r * G(2, 0) +
                 z * G(2, 1) - 2.0 * y * G(2, 2));
  dq[3] = 2.0 * (-2.0 * z * G(0, 0) - r * G(0, 1) + x * G(0, 2) + r * G(1, 0) - 2.0 * z * G(1, 1) +
                 y * G(1, 2) + x * G(2, 0) + y * G(2, 1));
  // through q / |q|
  return (dq - q * q.dot(dq)) / norm;
}

ProjectionGradient project_backward(const Camera& camera, const GaussianParams& g, const DoGParams& d,
                                    const Splat2D& splat, const SplatGradient& up) {
  const Mat3& W = camera.rotation;
  const Vec3& t = splat.cam_point;
  const Mat23 J = projection_jacobian(camera, t);
  const Mat3 R = rotation_matrix(g.rotation);
  const Vec3 s = g.scales();

  Mat23 dJ = Mat23::Zero();
  Mat3 dR = Mat3::Zero();
  Vec3 ds = Vec3::Zero();
  ProjectionGradient out;

  // conic -> 2D covariance -> 3D covariance -> (R, scales)
  auto branch = [&](const Conic& conic, const Mat2& dconic, const Vec3& branch_scales) -> Vec3 {
    const Mat2 A = conic.matrix();
    const Mat2 dcov = -A * dconic * A;
    const Mat3 T = R * branch_scales.asDiagonal();
    const Mat3 M = W * (T * T.transpose()) * W.transpose();
    dJ += 2.0 * dcov * J * M;
    const Mat3 dM = J.transpose() * dcov * J;
    const Mat3 dSigma = W.transpose() * dM * W;
    const Mat3 dT = 2.0 * dSigma * T;
    dR += dT * branch_scales.asDiagonal();
    return (dT.cwiseProduct(R)).colwise().sum().transpose();
  };

  ds += branch(splat.conic, up.conic, s);
  if (d.active && splat.pseudo_conic) {
    const Vec3 f = d.scale_factors();
    const Vec3 d_sf = branch(*splat.pseudo_conic, up.pseudo_conic, s.cwiseProduct(f));
    ds += d_sf.cwiseProduct(f);
    out.scale_factors = d_sf.cwiseProduct(s);
  }

  // camera-space point: through the mean and the Jacobian
  Vec3 dt = J.transpose() * up.mean2d;
  const double iz = 1.0 / t.z();
  const double iz2 = iz * iz;
  const double iz3 = iz2 * iz;
  dt.x() += dJ(0, 2) * (-camera.fx * iz2);
  dt.y() += dJ(1, 2) * (-camera.fy * iz2);
  dt.z() += dJ(0, 0) * (-camera.fx * iz2) + dJ(0, 2) * (2.0 * camera.fx * t.x() * iz3) +
            dJ(1, 1) * (-camera.fy * iz2) + dJ(1, 2) * (2.0 * camera.fy * t.y() * iz3);

  out.position = W.transpose() * dt;
  out.rotation = rotation_backward(g.rotation, dR);
  out.log_scales = ds.cwiseProduct(s);
  return out;
}

}  // namespace dogsplat
