#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dogsplat {

using Complex = std::complex<double>;

/// Row-major complex grid.
struct ComplexGrid {
  int width = 0;
  int height = 0;
  std::vector<Complex> data;

  Complex& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const Complex& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
std::size_t next_power_of_two(std::size_t n);

/// In-place iterative radix-2 transform, unnormalized. `inverse` flips the
/// sign of the exponent. Size must be a power of two.
void fft_radix2(std::span<Complex> data, bool inverse);

/// Unitary 2D DFT (scaled by 1/sqrt(W*H)); both dimensions powers of two.
ComplexGrid fft2(const ComplexGrid& field);
ComplexGrid ifft2(const ComplexGrid& spectrum);

/// Real field to complex grid, zero-padded to (pad_width, pad_height).
ComplexGrid to_complex(std::span<const double> field, int width, int height, int pad_width, int pad_height);

}  // namespace dogsplat
