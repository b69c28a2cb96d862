#include "dogsplat/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dogsplat {

double LearningRates::position_at(int iter) const {
  const double t = std::clamp(static_cast<double>(iter) / std::max(1, position_decay_steps), 0.0, 1.0);
  const double lr = std::exp(std::log(position_init) * (1.0 - t) + std::log(position_final) * t);
  return lr * spatial_scale;
}

double LearningRates::for_group(ParamGroup group, int iter) const {
  switch (group) {
    case ParamGroup::Position: return position_at(iter);
    case ParamGroup::Rotation: return rotation;
    case ParamGroup::LogScale: return scale;
    case ParamGroup::OpacityLogit: return opacity;
    case ParamGroup::ShDc: return color;
    case ParamGroup::ShRest: return color_rest;
    case ParamGroup::DogScaleLatent:
    case ParamGroup::DogAlphaLatent: return dog;
  }
  return 0.0;
}

AdamOptimizer::AdamOptimizer(LearningRates rates, int sh_degree, AdamHyper hyper)
    : rates_(rates), hyper_(hyper), sh_degree_(sh_degree),
      m_(ParamArrays::zeros(0, sh_degree)), v_(ParamArrays::zeros(0, sh_degree)) {}

void AdamOptimizer::resize(std::size_t count) {
  for (ParamGroup g : kAllParamGroups) {
    const std::size_t n = count * group_stride(g, sh_degree_);
    m_.group(g).resize(n, 0.0);
    v_.group(g).resize(n, 0.0);
  }
}

void AdamOptimizer::compact(std::span<const std::size_t> keep) {
  m_.compact(keep, sh_degree_);
  v_.compact(keep, sh_degree_);
}

void AdamOptimizer::reset_dog(std::size_t i) {
  for (ParamGroup g : {ParamGroup::DogScaleLatent, ParamGroup::DogAlphaLatent}) {
    const std::size_t stride = group_stride(g, sh_degree_);
    for (std::size_t k = 0; k < stride; ++k) {
      m_.group(g)[i * stride + k] = 0.0;
      v_.group(g)[i * stride + k] = 0.0;
    }
  }
}

void AdamOptimizer::step(SceneModel& scene, const ParamArrays& grads, int iter) {
  if (scene.sh_degree() != sh_degree_) throw std::invalid_argument("optimizer SH degree mismatch");
  const std::size_t n = scene.size();
  if (m_.opacity_logit.size() != n) resize(n);

  for (ParamGroup g : kAllParamGroups) {
    const bool dog_group = g == ParamGroup::DogScaleLatent || g == ParamGroup::DogAlphaLatent;
    if (dog_group && scene.dog_count() == 0) continue;
    const std::size_t stride = group_stride(g, sh_degree_);
    if (stride == 0) continue;

    auto& steps = steps_[static_cast<std::size_t>(g)];
    ++steps;
    const double lr = rates_.for_group(g, iter);
    const double bc1 = 1.0 - std::pow(hyper_.beta1, static_cast<double>(steps));
    const double bc2 = 1.0 - std::pow(hyper_.beta2, static_cast<double>(steps));

    auto& param = scene.params().group(g);
    const auto& grad = grads.group(g);
    auto& m = m_.group(g);
    auto& v = v_.group(g);
    for (std::size_t i = 0; i < n; ++i) {
      if (dog_group && !scene.dog_active(i)) continue;
      for (std::size_t k = i * stride; k < (i + 1) * stride; ++k) {
        m[k] = hyper_.beta1 * m[k] + (1.0 - hyper_.beta1) * grad[k];
        v[k] = hyper_.beta2 * v[k] + (1.0 - hyper_.beta2) * grad[k] * grad[k];
        param[k] -= lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + hyper_.eps);
      }
    }
  }
  scene.normalize_rotations();
}

}  // namespace dogsplat
