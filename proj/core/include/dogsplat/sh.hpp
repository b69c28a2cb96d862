#pragma once

#include "dogsplat/math.hpp"
#include "dogsplat/scene.hpp"

#include <array>

namespace dogsplat {

constexpr double kShC0 = 0.28209479177387814;
constexpr double kShC1 = 0.4886025119029199;
constexpr std::array<double, 5> kShC2 = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005,
                                         -1.0925484305920792, 0.5462742152960396};

/// Offset added to the decoded colour so a zero DC coefficient maps to grey;
/// matches the reference 3DGS checkpoint convention.
constexpr double kShDcOffset = 0.5;

/// Real SH basis values up to `degree` for a unit direction. Entries past
/// sh_coeff_count(degree) are zero.
std::array<double, kMaxShCoeffs> sh_basis(int degree, const Vec3& dir);

/// Gradient of each basis function with respect to the direction components.
std::array<Vec3, kMaxShCoeffs> sh_basis_grad(int degree, const Vec3& dir);

/// Decoded RGB, unclamped.
Vec3 eval_color(const GaussianParams& g, const Vec3& view_dir);

/// DC coefficient that decodes to `rgb`.
Vec3 rgb_to_sh_dc(const Vec3& rgb);

}  // namespace dogsplat
