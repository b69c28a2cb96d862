#include "dogsplat/spectral.hpp"

#include "dogsplat/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dogsplat {

namespace {

FrequencyWeightGrid weight_grid(int height, int width, double gamma, bool uniform) {
  if (height < 1 || width < 1) throw DimensionMismatch("weight grid must be non-empty");
  FrequencyWeightGrid g;
  g.width = width;
  g.height = height;
  g.gamma = gamma;
  g.weights.assign(static_cast<std::size_t>(width) * height, 1.0);
  if (uniform) return g;

  std::vector<double> radius(g.weights.size());
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double fx = wrapped_frequency(x, width);
      const double fy = wrapped_frequency(y, height);
      radius[static_cast<std::size_t>(y) * width + x] = std::hypot(fx, fy);
    }
  g.omega_max = *std::max_element(radius.begin(), radius.end());
  for (std::size_t i = 0; i < radius.size(); ++i)
    g.weights[i] = g.omega_max > 0.0 ? std::pow(radius[i] / g.omega_max, gamma) : 0.0;
  g.weights[0] = 0.0;
  return g;
}

void check_grid(const OpacityGradientFields& fields, const FrequencyWeightGrid& w) {
  if (w.width != scoring_extent(fields.width) || w.height != scoring_extent(fields.height))
    throw DimensionMismatch("weight grid must match the padded field size");
}

}  // namespace

FrequencyWeightGrid radial_weights(int height, int width, double gamma) {
  if (!(gamma > 0.0)) throw InvalidExponent("gamma_f must be positive");
  return weight_grid(height, width, gamma, false);
}

FrequencyWeightGrid uniform_weights(int height, int width) { return weight_grid(height, width, 0.0, true); }

std::vector<double> spectral_score_direct(const OpacityGradientFields& fields, const FrequencyWeightGrid& w) {
  check_grid(fields, w);
  std::vector<double> scores(fields.per_primitive.size(), 0.0);
  ComplexGrid grid;
  grid.width = w.width;
  grid.height = w.height;
  for (std::size_t i = 0; i < fields.per_primitive.size(); ++i) {
    const auto& entries = fields.per_primitive[i];
    if (entries.empty()) continue;
    for (int c = 0; c < 3; ++c) {
      grid.data.assign(static_cast<std::size_t>(w.width) * w.height, Complex{});
      for (const auto& e : entries) {
        const int x = static_cast<int>(e.pixel % fields.width);
        const int y = static_cast<int>(e.pixel / fields.width);
        grid.at(x, y) = e.value[c];
      }
      const ComplexGrid spectrum = fft2(grid);
      double sum = 0.0;
      for (std::size_t b = 0; b < spectrum.data.size(); ++b) sum += w.weights[b] * std::norm(spectrum.data[b]);
      scores[i] += sum;
    }
  }
  return scores;
}

SpectralFilter::SpectralFilter(FrequencyWeightGrid weights) : weights_(std::move(weights)) {
  const int W = weights_.width;
  const int H = weights_.height;
  ComplexGrid spectrum;
  spectrum.width = W;
  spectrum.height = H;
  spectrum.data.assign(weights_.weights.begin(), weights_.weights.end());
  // k(d) = (1/P) sum_w w e^{+i w.d} = ifft2(w) / sqrt(P) under the unitary scaling
  const ComplexGrid k = ifft2(spectrum);
  const double scale = 1.0 / std::sqrt(static_cast<double>(W) * H);
  kernel_.resize(k.data.size());
  for (std::size_t i = 0; i < k.data.size(); ++i) kernel_[i] = k.data[i].real() * scale;
  sqrt_response_.resize(weights_.weights.size());
  for (std::size_t i = 0; i < sqrt_response_.size(); ++i) sqrt_response_[i] = std::sqrt(weights_.weights[i]);
}

double SpectralFilter::kernel(int dx, int dy) const {
  const int W = weights_.width;
  const int H = weights_.height;
  const int x = ((dx % W) + W) % W;
  const int y = ((dy % H) + H) % H;
  return kernel_[static_cast<std::size_t>(y) * W + x];
}

std::vector<double> spectral_score_filtered(const OpacityGradientFields& fields, const SpectralFilter& filter,
                                            const SpectralScoreOptions& options) {
  const FrequencyWeightGrid& w = filter.weights();
  check_grid(fields, w);
  const double P = static_cast<double>(w.width) * w.height;
  const long long pair_limit =
      options.pair_limit >= 0 ? options.pair_limit : static_cast<long long>(4.0 * P * std::log2(std::max(P, 2.0)));

  std::vector<double> scores(fields.per_primitive.size(), 0.0);
  ComplexGrid grid;
  grid.width = w.width;
  grid.height = w.height;
  for (std::size_t i = 0; i < fields.per_primitive.size(); ++i) {
    const auto& entries = fields.per_primitive[i];
    const auto n = static_cast<long long>(entries.size());
    if (n == 0) continue;

    if (n * n <= pair_limit) {
      // sum_{y,y'} k(y - y') J(y) . J(y')
      double sum = 0.0;
      for (long long a = 0; a < n; ++a) {
        const auto& ea = entries[static_cast<std::size_t>(a)];
        const int xa = static_cast<int>(ea.pixel % fields.width);
        const int ya = static_cast<int>(ea.pixel / fields.width);
        sum += filter.kernel(0, 0) * ea.value.squaredNorm();
        for (long long b = a + 1; b < n; ++b) {
          const auto& eb = entries[static_cast<std::size_t>(b)];
          const int xb = static_cast<int>(eb.pixel % fields.width);
          const int yb = static_cast<int>(eb.pixel / fields.width);
          sum += 2.0 * filter.kernel(xa - xb, ya - yb) * ea.value.dot(eb.value);
        }
      }
      scores[i] = std::max(sum, 0.0);
      continue;
    }

    double sum = 0.0;
    for (int c = 0; c < 3; ++c) {
      grid.data.assign(static_cast<std::size_t>(w.width) * w.height, Complex{});
      for (const auto& e : entries) {
        const int x = static_cast<int>(e.pixel % fields.width);
        const int y = static_cast<int>(e.pixel / fields.width);
        grid.at(x, y) = e.value[c];
      }
      ComplexGrid spectrum = fft2(grid);
      for (std::size_t b = 0; b < spectrum.data.size(); ++b) spectrum.data[b] *= filter.sqrt_response()[b];
      const ComplexGrid filtered = ifft2(spectrum);
      for (const auto& v : filtered.data) sum += std::norm(v);
    }
    scores[i] = sum;
  }
  return scores;
}

std::vector<double> spectral_score_filtered(const SceneModel& scene, const Camera& camera,
                                            const FrequencyWeightGrid& weights, const RenderOptions& render_options,
                                            const SpectralScoreOptions& options) {
  const OpacityGradientFields fields = opacity_gradient_fields(scene, camera, render_options);
  check_grid(fields, weights);
  return spectral_score_filtered(fields, SpectralFilter(weights), options);
}

}  // namespace dogsplat
