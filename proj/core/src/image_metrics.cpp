#include "dogsplat/image_metrics.hpp"

#include "dogsplat/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dogsplat {

namespace {

void check_shapes(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b) || a.rgb.size() != b.rgb.size())
    throw DimensionMismatch("image sizes differ");
}

std::array<double, kSsimWindow> gaussian_window() {
  std::array<double, kSsimWindow> w{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    w[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

/// Separable zero-padded "same" filtering of one plane.
std::vector<double> blur(const std::vector<double>& in, int width, int height) {
  static const auto w = gaussian_window();
  constexpr int half = kSsimWindow / 2;
  std::vector<double> tmp(in.size(), 0.0);
  std::vector<double> out(in.size(), 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int k = -half; k <= half; ++k) {
        const int xx = x + k;
        if (xx >= 0 && xx < width) s += w[k + half] * in[static_cast<std::size_t>(y) * width + xx];
      }
      tmp[static_cast<std::size_t>(y) * width + x] = s;
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int k = -half; k <= half; ++k) {
        const int yy = y + k;
        if (yy >= 0 && yy < height) s += w[k + half] * tmp[static_cast<std::size_t>(yy) * width + x];
      }
      out[static_cast<std::size_t>(y) * width + x] = s;
    }
  }
  return out;
}

std::vector<double> channel(const ImageBuffer& img, int c) {
  std::vector<double> out(img.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = img.rgb[3 * i + c];
  return out;
}

/// Mean SSIM of all channels; optionally d(mean SSIM)/d(a).
double ssim_impl(const ImageBuffer& a, const ImageBuffer& b, std::vector<double>* grad) {
  const int w = a.width;
  const int h = a.height;
  const std::size_t n = a.pixel_count();
  if (n == 0) return 1.0;
  const double norm = 1.0 / (3.0 * static_cast<double>(n));
  if (grad) grad->assign(3 * n, 0.0);

  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto x = channel(a, c);
    const auto y = channel(b, c);
    std::vector<double> xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
    const auto mx = blur(x, w, h);
    const auto my = blur(y, w, h);
    const auto mxx = blur(xx, w, h);
    const auto myy = blur(yy, w, h);
    const auto mxy = blur(xy, w, h);

    std::vector<double> da, db, dc;
    if (grad) {
      da.resize(n);
      db.resize(n);
      dc.resize(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double sx = mxx[i] - mx[i] * mx[i];
      const double sy = myy[i] - my[i] * my[i];
      const double sxy = mxy[i] - mx[i] * my[i];
      const double a1 = 2.0 * mx[i] * my[i] + kSsimC1;
      const double a2 = 2.0 * sxy + kSsimC2;
      const double b1 = mx[i] * mx[i] + my[i] * my[i] + kSsimC1;
      const double b2 = sx + sy + kSsimC2;
      const double s = a1 * a2 / (b1 * b2);
      total += s;
      if (grad) {
        // partials of s with respect to mu_x, E[x^2] and E[xy]
        da[i] = (2.0 * my[i] * a2 - 2.0 * my[i] * a1) / (b1 * b2) - s * (2.0 * mx[i] / b1 - 2.0 * mx[i] / b2);
        db[i] = -s / b2;
        dc[i] = 2.0 * a1 / (b1 * b2);
      }
    }
    if (grad) {
      const auto ga = blur(da, w, h);
      const auto gb = blur(db, w, h);
      const auto gc = blur(dc, w, h);
      for (std::size_t i = 0; i < n; ++i)
        (*grad)[3 * i + c] = norm * (ga[i] + 2.0 * x[i] * gb[i] + y[i] * gc[i]);
    }
  }
  return total * norm;
}

}  // namespace

double l1_error(const ImageBuffer& a, const ImageBuffer& b) {
  check_shapes(a, b);
  if (a.rgb.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) s += std::abs(a.rgb[i] - b.rgb[i]);
  return s / static_cast<double>(a.rgb.size());
}

double mse(const ImageBuffer& a, const ImageBuffer& b) {
  check_shapes(a, b);
  if (a.rgb.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) {
    const double d = a.rgb[i] - b.rgb[i];
    s += d * d;
  }
  return s / static_cast<double>(a.rgb.size());
}

double ssim(const ImageBuffer& a, const ImageBuffer& b) {
  check_shapes(a, b);
  return ssim_impl(a, b, nullptr);
}

double psnr_from_mse(double m) {
  if (!(m > 0.0)) return kPsnrCap;
  return std::min(kPsnrCap, -10.0 * std::log10(m));
}

double psnr(const ImageBuffer& a, const ImageBuffer& b) { return psnr_from_mse(mse(a, b)); }

ImageBuffer clamped(const ImageBuffer& image) {
  ImageBuffer out = image;
  for (double& v : out.rgb) v = std::clamp(v, 0.0, 1.0);
  return out;
}

LossValue image_loss(const ImageBuffer& render, const ImageBuffer& gt, double lambda) {
  check_shapes(render, gt);
  LossValue out;
  out.adjoint = ImageBuffer::filled(render.width, render.height, Vec3::Zero());
  const std::size_t count = render.rgb.size();
  if (count == 0) return out;

  out.l1 = l1_error(render, gt);
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double d = render.rgb[i] - gt.rgb[i];
    const double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    out.adjoint.rgb[i] = (1.0 - lambda) * sign * inv;
  }
  if (lambda != 0.0) {
    std::vector<double> g;
    out.ssim = ssim_impl(render, gt, &g);
    for (std::size_t i = 0; i < count; ++i) out.adjoint.rgb[i] -= lambda * g[i];
  } else {
    out.ssim = ssim_impl(render, gt, nullptr);
  }
  out.value = (1.0 - lambda) * out.l1 + lambda * (1.0 - out.ssim);
  return out;
}

}  // namespace dogsplat
