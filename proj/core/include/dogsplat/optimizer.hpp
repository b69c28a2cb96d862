#pragma once

#include "dogsplat/scene.hpp"

#include <array>
#include <cstddef>
#include <span>

namespace dogsplat {

/// Per-group learning rates. Position decays log-linearly from
/// `position_init` to `position_final` over `position_decay_steps`, scaled
/// by `spatial_scale` (scene extent).
struct LearningRates {
  double position_init = 1.6e-4;
  double position_final = 1.6e-6;
  int position_decay_steps = 30000;
  double spatial_scale = 1.0;
  double opacity = 5e-2;
  double scale = 5e-3;
  double rotation = 1e-3;
  double color = 2.5e-3;
  double color_rest = 2.5e-3 / 20.0;
  double dog = 5e-3;

  double position_at(int iter) const;
  double for_group(ParamGroup group, int iter) const;
};

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-15;
};

/// Adaptive-moment optimizer over the scene's parameter groups. Moments
/// share the scene's structure-of-arrays layout and are compacted with it.
class AdamOptimizer {
 public:
  AdamOptimizer(LearningRates rates, int sh_degree, AdamHyper hyper = {});

  /// Brings the moment arrays to `count` primitives (new entries zeroed).
  void resize(std::size_t count);
  /// Keeps the moments of `keep` (strictly ascending), in that order.
  void compact(std::span<const std::size_t> keep);
  /// Zeroes the DoG moments of primitive i (fresh activation).
  void reset_dog(std::size_t i);

  /// One update. DoG latents of inactive primitives are frozen. Rotations
  /// are renormalized afterwards.
  void step(SceneModel& scene, const ParamArrays& grads, int iter);

  const ParamArrays& first_moment() const { return m_; }
  const ParamArrays& second_moment() const { return v_; }
  const LearningRates& rates() const { return rates_; }
  long long group_steps(ParamGroup g) const { return steps_[static_cast<std::size_t>(g)]; }

 private:
  LearningRates rates_;
  AdamHyper hyper_;
  int sh_degree_;
  ParamArrays m_;
  ParamArrays v_;
  std::array<long long, kAllParamGroups.size()> steps_{};
};

}  // namespace dogsplat
