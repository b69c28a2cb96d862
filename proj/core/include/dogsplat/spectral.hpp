#pragma once

#include "dogsplat/camera.hpp"
#include "dogsplat/fft.hpp"
#include "dogsplat/rasterizer.hpp"
#include "dogsplat/scene.hpp"

#include <vector>

namespace dogsplat {

/// Per-bin frequency weights over a (padded) scoring grid.
struct FrequencyWeightGrid {
  int width = 0;
  int height = 0;
  double gamma = 1.0;
  double omega_max = 0.0;
  std::vector<double> weights;  // row-major

  double at(int x, int y) const { return weights[static_cast<std::size_t>(y) * width + x]; }
};

/// Signed integer frequency of bin k on an n-point axis.
inline int wrapped_frequency(int k, int n) { return k <= n / 2 ? k : k - n; }

/// w(omega) = (|omega| / omega_max)^gamma with w(0) = 0. Throws
/// InvalidExponent for gamma <= 0.
FrequencyWeightGrid radial_weights(int height, int width, double gamma);

/// w = 1 everywhere (the spectral score then equals the spatial score).
FrequencyWeightGrid uniform_weights(int height, int width);

/// Power-of-two grid the gradient fields are zero-padded to.
inline int scoring_extent(int n) { return static_cast<int>(next_power_of_two(static_cast<std::size_t>(n))); }

/// Reference evaluator: materializes each field, transforms it and sums
/// w * |F J_i|^2 over bins and channels. O(N * P log P).
std::vector<double> spectral_score_direct(const OpacityGradientFields& fields, const FrequencyWeightGrid& weights);

/// Precomputed spatial filters for a weight grid.
class SpectralFilter {
 public:
  explicit SpectralFilter(FrequencyWeightGrid weights);

  const FrequencyWeightGrid& weights() const { return weights_; }
  /// Circular autocorrelation kernel whose spectrum is w.
  double kernel(int dx, int dy) const;
  /// sqrt(w) as a frequency response, for the dense branch.
  const std::vector<double>& sqrt_response() const { return sqrt_response_; }

 private:
  FrequencyWeightGrid weights_;
  std::vector<double> kernel_;
  std::vector<double> sqrt_response_;
};

struct SpectralScoreOptions {
  /// Fields with support^2 at or below this many pair terms are scored in
  /// the spatial domain against the autocorrelation kernel; larger ones are
  /// filtered densely. < 0 picks a limit from the grid size.
  long long pair_limit = -1;
};

/// Production evaluator: filters each sparse gradient field with the
/// response sqrt(w) and sums the squared filtered values. Mathematically
/// equal to spectral_score_direct.
std::vector<double> spectral_score_filtered(const OpacityGradientFields& fields, const SpectralFilter& filter,
                                            const SpectralScoreOptions& options = {});

/// Renders `camera` and scores every primitive of `scene`.
std::vector<double> spectral_score_filtered(const SceneModel& scene, const Camera& camera,
                                            const FrequencyWeightGrid& weights,
                                            const RenderOptions& render_options = {},
                                            const SpectralScoreOptions& options = {});

}  // namespace dogsplat
