#include "dogsplat/dog_control.hpp"

#include "dogsplat/errors.hpp"

namespace dogsplat {

std::size_t activate_dog(SceneModel& scene, const DoGInit& init, AdamOptimizer* optimizer) {
  const double fmax = scene.scale_factor_max();
  if (!(init.scale_factor > 0.0 && init.scale_factor < fmax))
    throw RangeError("initial DoG scale factor must lie in (0, f_s_max)");
  if (!(init.alpha_factor > 0.0 && init.alpha_factor < 1.0))
    throw RangeError("initial DoG opacity factor must lie in (0, 1)");
  if (scene.empty() || scene.dog_count() > 0) return 0;

  const double scale_latent = logit(init.scale_factor / fmax);
  const double alpha_latent = logit(init.alpha_factor);
  auto& p = scene.params();
  for (std::size_t i = 0; i < scene.size(); ++i) {
    for (int k = 0; k < 3; ++k) p.dog_scale[3 * i + k] = scale_latent;
    p.dog_alpha[i] = alpha_latent;
    scene.set_dog_active(i, true);
    if (optimizer) optimizer->reset_dog(i);
  }
  return scene.size();
}

std::size_t degrade_step(SceneModel& scene, double threshold, DegradeRule rule) {
  const auto& p = scene.params();
  std::size_t count = 0;
  for (std::size_t i = 0; i < scene.size(); ++i) {
    if (!scene.dog_active(i)) continue;
    double value = logistic(p.dog_alpha[i]);
    if (rule == DegradeRule::PseudoOpacity) value *= logistic(p.opacity_logit[i]);
    if (value < threshold) {
      scene.set_dog_active(i, false);
      ++count;
    }
  }
  return count;
}

}  // namespace dogsplat
