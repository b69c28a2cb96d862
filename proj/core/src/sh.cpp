#include "dogsplat/sh.hpp"

namespace dogsplat {

std::array<double, kMaxShCoeffs> sh_basis(int degree, const Vec3& dir) {
  std::array<double, kMaxShCoeffs> b{};
  b[0] = kShC0;
  if (degree < 1) return b;
  const double x = dir.x(), y = dir.y(), z = dir.z();
  b[1] = -kShC1 * y;
  b[2] = kShC1 * z;
  b[3] = -kShC1 * x;
  if (degree < 2) return b;
  b[4] = kShC2[0] * x * y;
  b[5] = kShC2[1] * y * z;
  b[6] = kShC2[2] * (2.0 * z * z - x * x - y * y);
  b[7] = kShC2[3] * x * z;
  b[8] = kShC2[4] * (x * x - y * y);
  return b;
}

std::array<Vec3, kMaxShCoeffs> sh_basis_grad(int degree, const Vec3& dir) {
  std::array<Vec3, kMaxShCoeffs> g;
  g.fill(Vec3::Zero());
  if (degree < 1) return g;
  const double x = dir.x(), y = dir.y(), z = dir.z();
  g[1] = Vec3(0.0, -kShC1, 0.0);
  g[2] = Vec3(0.0, 0.0, kShC1);
  g[3] = Vec3(-kShC1, 0.0, 0.0);
  if (degree < 2) return g;
  g[4] = kShC2[0] * Vec3(y, x, 0.0);
  g[5] = kShC2[1] * Vec3(0.0, z, y);
  g[6] = kShC2[2] * Vec3(-2.0 * x, -2.0 * y, 4.0 * z);
  g[7] = kShC2[3] * Vec3(z, 0.0, x);
  g[8] = kShC2[4] * Vec3(2.0 * x, -2.0 * y, 0.0);
  return g;
}

Vec3 eval_color(const GaussianParams& g, const Vec3& view_dir) {
  const auto basis = sh_basis(g.sh_degree, view_dir);
  Vec3 rgb = Vec3::Constant(kShDcOffset);
  for (int k = 0; k < sh_coeff_count(g.sh_degree); ++k) rgb += basis[k] * g.sh[k];
  return rgb;
}

Vec3 rgb_to_sh_dc(const Vec3& rgb) { return (rgb.array() - kShDcOffset) / kShC0; }

}  // namespace dogsplat
