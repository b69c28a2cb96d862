#include "dogsplat/pruning.hpp"

#include "dogsplat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace dogsplat {

ScoreVector accumulate_scores(const SceneModel& scene, std::span<const Camera> views, const ScoreOptions& options) {
  ScoreVector s;
  s.spatial.assign(scene.size(), 0.0);
  s.spectral.assign(scene.size(), 0.0);
  s.combined.assign(scene.size(), 0.0);

  // filters depend only on the image size, so cache the last one
  std::optional<SpectralFilter> filter;
  for (const Camera& cam : views) {
    const RenderFrame frame(scene, cam, options.render);
    const OpacityGradientFields fields = opacity_gradient_fields(scene, frame);
    const int pw = scoring_extent(cam.width);
    const int ph = scoring_extent(cam.height);
    if (!filter || filter->weights().width != pw || filter->weights().height != ph) {
      filter.emplace(options.uniform_spectrum ? uniform_weights(ph, pw) : radial_weights(ph, pw, options.gamma_f));
    }
    const std::vector<double> spectral = options.direct_spectral
                                             ? spectral_score_direct(fields, filter->weights())
                                             : spectral_score_filtered(fields, *filter, options.spectral);
    for (std::size_t i = 0; i < scene.size(); ++i) {
      s.spatial[i] += fields.spatial_sq_grad[i];
      s.spectral[i] += spectral[i];
    }
    ++s.views_accumulated;
  }
  return s;
}

std::vector<double> combine_sps(const ScoreVector& scores, double lambda_s, double lambda_f) {
  if (scores.spatial.size() != scores.spectral.size())
    throw DimensionMismatch("spatial and spectral scores differ in length");
  auto norm = [](const std::vector<double>& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  };
  const double ns = norm(scores.spatial);
  const double nf = norm(scores.spectral);
  if (ns == 0.0 && nf == 0.0) throw AllZeroScores("both score vectors are zero");
  std::vector<double> out(scores.spatial.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (ns > 0.0) out[i] += lambda_s * scores.spatial[i] / ns;
    if (nf > 0.0) out[i] += lambda_f * scores.spectral[i] / nf;
  }
  return out;
}

std::size_t prune_count(std::size_t n, double ratio) {
  const double exact = ratio * static_cast<double>(n);
  const double nearest = std::round(exact);
  if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(exact));
}

std::vector<std::size_t> lowest_k(std::span<const double> scores, std::size_t k) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  k = std::min(k, order.size());
  auto less = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), less);
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

PruneRecord remove_primitives(SceneModel& scene, std::span<const std::size_t> removed, AdamOptimizer* optimizer) {
  PruneRecord record;
  record.before = scene.size();
  record.removed.assign(removed.begin(), removed.end());
  std::vector<std::size_t> keep;
  keep.reserve(scene.size() - std::min(scene.size(), removed.size()));
  std::size_t r = 0;
  for (std::size_t i = 0; i < scene.size(); ++i) {
    if (r < removed.size() && removed[r] == i) {
      ++r;
      continue;
    }
    keep.push_back(i);
  }
  scene.compact(keep);
  if (optimizer) optimizer->compact(keep);
  return record;
}

PruneRecord rank_and_prune(SceneModel& scene, std::span<const double> scores, double ratio,
                           AdamOptimizer* optimizer) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw RatioOutOfRange("prune ratio must lie in (0, 1)");
  if (scores.size() != scene.size()) throw DimensionMismatch("score vector does not match the scene");
  const auto removed = lowest_k(scores, prune_count(scene.size(), ratio));
  return remove_primitives(scene, removed, optimizer);
}

std::vector<double> activated_opacities(const SceneModel& scene) {
  std::vector<double> out(scene.size());
  for (std::size_t i = 0; i < scene.size(); ++i) out[i] = logistic(scene.params().opacity_logit[i]);
  return out;
}

PruneRecord opacity_rank_prune(SceneModel& scene, double ratio, AdamOptimizer* optimizer) {
  const auto opacity = activated_opacities(scene);
  return rank_and_prune(scene, opacity, ratio, optimizer);
}

}  // namespace dogsplat
