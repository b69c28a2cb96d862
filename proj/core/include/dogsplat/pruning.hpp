#pragma once

#include "dogsplat/camera.hpp"
#include "dogsplat/optimizer.hpp"
#include "dogsplat/rasterizer.hpp"
#include "dogsplat/scene.hpp"
#include "dogsplat/spectral.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dogsplat {

/// Per-primitive importance, accumulated over a set of views.
struct ScoreVector {
  std::vector<double> spatial;
  std::vector<double> spectral;
  std::vector<double> combined;
  std::size_t views_accumulated = 0;
};

struct ScoreOptions {
  double gamma_f = 1.0;
  /// Replace the radial schedule with w = 1 (spectral == spatial).
  bool uniform_spectrum = false;
  /// Score with the reference evaluator instead of the filtered one.
  bool direct_spectral = false;
  RenderOptions render;
  SpectralScoreOptions spectral;
};

/// Sums the spatial and spectral scores of every primitive over `views`.
/// The scene is not modified.
ScoreVector accumulate_scores(const SceneModel& scene, std::span<const Camera> views,
                              const ScoreOptions& options = {});

/// lambda_s * spatial / |spatial|_2 + lambda_f * spectral / |spectral|_2.
/// A zero-norm term is dropped; throws AllZeroScores if both are.
std::vector<double> combine_sps(const ScoreVector& scores, double lambda_s, double lambda_f);

/// ceil(ratio * n), robust to ratio having been computed as k / n.
std::size_t prune_count(std::size_t n, double ratio);

/// Indices of the k lowest scores, ties resolved toward the lower index.
/// Returned ascending.
std::vector<std::size_t> lowest_k(std::span<const double> scores, std::size_t k);

struct PruneRecord {
  std::size_t before = 0;
  std::vector<std::size_t> removed;  // indices into the pre-prune scene, ascending
};

/// Removes the given primitives (ascending) from the scene and, when given,
/// from the optimizer state.
PruneRecord remove_primitives(SceneModel& scene, std::span<const std::size_t> removed,
                              AdamOptimizer* optimizer = nullptr);

/// Removes the ceil(ratio * N) lowest-scoring primitives. Throws
/// RatioOutOfRange unless 0 < ratio < 1.
PruneRecord rank_and_prune(SceneModel& scene, std::span<const double> scores, double ratio,
                           AdamOptimizer* optimizer = nullptr);

/// rank_and_prune with the activated opacity as score.
PruneRecord opacity_rank_prune(SceneModel& scene, double ratio, AdamOptimizer* optimizer = nullptr);

std::vector<double> activated_opacities(const SceneModel& scene);

}  // namespace dogsplat
