#pragma once

#include "dogsplat/optimizer.hpp"
#include "dogsplat/scene.hpp"

#include <cstddef>

namespace dogsplat {

/// Activated values every pseudo-Gaussian starts from.
struct DoGInit {
  double scale_factor = 0.5;
  double alpha_factor = 0.1;
};

enum class DegradeRule {
  AlphaFactor,    // f_alpha < threshold
  PseudoOpacity,  // alpha_p = f_alpha * alpha < threshold
};

/// Turns every primitive into a DoG with the given initial factors.
/// A scene that already holds an active DoG is left alone, so a repeated
/// call is a no-op. Returns the number of
/// primitives activated. Throws RangeError if scale_factor is outside
/// (0, f_s_max) or alpha_factor outside (0, 1).
std::size_t activate_dog(SceneModel& scene, const DoGInit& init = {}, AdamOptimizer* optimizer = nullptr);

/// Deactivates every active DoG whose factor falls strictly below
/// `threshold`. Returns the number degraded.
std::size_t degrade_step(SceneModel& scene, double threshold = 0.01, DegradeRule rule = DegradeRule::AlphaFactor);

}  // namespace dogsplat
