#pragma once

#include "dogsplat/rasterizer.hpp"

namespace dogsplat {

/// Structural-similarity window: 11x11 Gaussian, sigma 1.5.
constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

/// PSNR reported for identical images.
constexpr double kPsnrCap = 99.0;

struct LossValue {
  double value = 0.0;
  double l1 = 0.0;
  double ssim = 1.0;
  ImageBuffer adjoint;  // dL/dI, same shape as the render
};

/// (1 - lambda) * L1 + lambda * (1 - SSIM) on unclamped values, with its
/// gradient. Throws DimensionMismatch.
LossValue image_loss(const ImageBuffer& render, const ImageBuffer& gt, double lambda_dssim = 0.2);

/// Mean absolute difference over pixels and channels.
double l1_error(const ImageBuffer& a, const ImageBuffer& b);
double mse(const ImageBuffer& a, const ImageBuffer& b);
/// Mean SSIM over pixels and channels (zero-padded window).
double ssim(const ImageBuffer& a, const ImageBuffer& b);
/// 10 log10(1 / MSE), capped at kPsnrCap.
double psnr(const ImageBuffer& a, const ImageBuffer& b);
double psnr_from_mse(double mse);

/// Copy with every channel clamped to [0, 1].
ImageBuffer clamped(const ImageBuffer& image);

}  // namespace dogsplat
