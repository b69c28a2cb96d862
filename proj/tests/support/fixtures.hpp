#pragma once

#include "dogsplat/rasterizer.hpp"
#include "dogsplat/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace dogsplat::testing {

struct RandomSceneOptions {
  int count = 6;
  int sh_degree = 0;
  double scale_factor_max = 1.0;
  /// Fraction of primitives with an active DoG.
  double dog_fraction = 0.5;
  double spread = 0.6;
  double min_scale = 0.08;
  double max_scale = 0.2;
};

/// Primitives around the origin, seen by front_camera().
inline SceneModel random_scene(std::mt19937_64& rng, const RandomSceneOptions& o = {}) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SceneModel scene(o.sh_degree, o.scale_factor_max);
  for (int i = 0; i < o.count; ++i) {
    GaussianParams g;
    g.sh_degree = o.sh_degree;
    g.position = o.spread * Vec3(u(rng), u(rng), u(rng));
    g.rotation = Vec4(u(rng), u(rng), u(rng), u(rng)).normalized();
    for (int k = 0; k < 3; ++k) g.log_scales[k] = std::log(o.min_scale + (o.max_scale - o.min_scale) * unit(rng));
    g.opacity_logit = 1.5 * u(rng);
    for (int k = 0; k < sh_coeff_count(o.sh_degree); ++k) g.sh[k] = 0.5 * Vec3(u(rng), u(rng), u(rng));
    DoGParams d;
    d.scale_max = o.scale_factor_max;
    d.active = unit(rng) < o.dog_fraction;
    d.scale_latent = Vec3(u(rng), u(rng), u(rng));
    d.alpha_latent = u(rng) - 1.0;
    scene.push_back(g, d);
  }
  return scene;
}

inline Camera front_camera(int width, int height, double focal_scale = 1.25) {
  return Camera::look_at(Vec3(0.3, -0.5, -3.0), Vec3::Zero(), Vec3::UnitY(), focal_scale * width, width, height);
}

inline ImageBuffer random_adjoint(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ImageBuffer a = ImageBuffer::filled(width, height, Vec3::Zero());
  for (double& v : a.rgb) v = u(rng);
  return a;
}

inline double weighted_sum(const ImageBuffer& image, const ImageBuffer& weights) {
  double s = 0.0;
  for (std::size_t i = 0; i < image.rgb.size(); ++i) s += image.rgb[i] * weights.rgb[i];
  return s;
}

struct GradCheckStats {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::size_t masked = 0;  // entries whose stencil crossed a discrete cutoff
  double worst_relative = 0.0;
  std::vector<std::string> messages;
};

/// Compares backward() against central differences of sum(adjoint * render)
/// for every latent. When the two stencil points blend a different set of
/// primitives at some pixel, or clamp differently, the loss is not
/// differentiable there; those pixels are dropped from the adjoint for both
/// the analytic and the numeric gradient of that entry.
inline GradCheckStats gradient_check(const SceneModel& scene, const Camera& camera, const ImageBuffer& adjoint,
                                     const RenderOptions& options, double eps = 1e-4, double rel_tol = 1e-4,
                                     double abs_tol = 1e-7, double small = 1e-3) {
  GradCheckStats stats;
  const GradientBundle grads = backward(scene, camera, adjoint, options);
  for (ParamGroup group : kAllParamGroups) {
    const std::size_t n = scene.params().group(group).size();
    for (std::size_t j = 0; j < n; ++j) {
      SceneModel plus = scene;
      SceneModel minus = scene;
      plus.params().group(group)[j] += eps;
      minus.params().group(group)[j] -= eps;
      const auto tp = contribution_trace(plus, camera, options);
      const auto tm = contribution_trace(minus, camera, options);
      ImageBuffer adj = adjoint;
      double analytic = grads.params.group(group)[j];
      if (tp != tm) {
        ++stats.masked;
        for (std::size_t q = 0; q < tp.size(); ++q)
          if (tp[q] != tm[q])
            for (int c = 0; c < 3; ++c) adj.rgb[3 * q + c] = 0.0;
        analytic = backward(scene, camera, adj, options).params.group(group)[j];
      }
      const double numeric =
          (weighted_sum(render_tiled(plus, camera, options), adj) - weighted_sum(render_tiled(minus, camera, options), adj)) /
          (2.0 * eps);
      const double diff = std::abs(numeric - analytic);
      const double scale = std::max(std::abs(numeric), std::abs(analytic));
      const bool ok = scale < small ? diff <= abs_tol : diff / scale <= rel_tol;
      if (scale >= small) stats.worst_relative = std::max(stats.worst_relative, diff / scale);
      ++stats.checked;
      if (!ok) {
        ++stats.failures;
        if (stats.messages.size() < 10)
          stats.messages.push_back(std::string(param_group_name(group)) + "[" + std::to_string(j) +
                                   "] analytic=" + std::to_string(analytic) + " numeric=" + std::to_string(numeric));
      }
    }
  }
  return stats;
}

}  // namespace dogsplat::testing
