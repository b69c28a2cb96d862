#include "dogsplat/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace dogsplat {

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_radix2(std::span<Complex> a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      // twiddles from the exact angle rather than by repeated multiplication
      const Complex w = std::polar(1.0, angle * static_cast<double>(k));
      for (std::size_t i = k; i < n; i += len) {
        const Complex u = a[i];
        const Complex v = a[i + half] * w;
        a[i] = u + v;
        a[i + half] = u - v;
      }
    }
  }
}

namespace {

ComplexGrid transform2d(const ComplexGrid& in, bool inverse) {
  if (!is_power_of_two(in.width) || !is_power_of_two(in.height))
    throw std::invalid_argument("fft2 dimensions must be powers of two");
  ComplexGrid out = in;
  const auto w = static_cast<std::size_t>(in.width);
  const auto h = static_cast<std::size_t>(in.height);
  for (std::size_t y = 0; y < h; ++y) fft_radix2(std::span<Complex>(out.data.data() + y * w, w), inverse);
  std::vector<Complex> column(h);
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t y = 0; y < h; ++y) column[y] = out.data[y * w + x];
    fft_radix2(column, inverse);
    for (std::size_t y = 0; y < h; ++y) out.data[y * w + x] = column[y];
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(w * h));
  for (auto& v : out.data) v *= scale;
  return out;
}

}  // namespace

ComplexGrid fft2(const ComplexGrid& field) { return transform2d(field, false); }
ComplexGrid ifft2(const ComplexGrid& spectrum) { return transform2d(spectrum, true); }

ComplexGrid to_complex(std::span<const double> field, int width, int height, int pad_width, int pad_height) {
  if (pad_width < width || pad_height < height) throw std::invalid_argument("padding smaller than field");
  ComplexGrid g;
  g.width = pad_width;
  g.height = pad_height;
  g.data.assign(static_cast<std::size_t>(pad_width) * pad_height, Complex{});
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) g.at(x, y) = field[static_cast<std::size_t>(y) * width + x];
  return g;
}

}  // namespace dogsplat
