#include "dogsplat/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace dogsplat {
namespace {

SceneModel two_primitives(int sh_degree = 1) {
  SceneModel scene(sh_degree);
  for (int i = 0; i < 2; ++i) {
    GaussianParams g;
    g.sh_degree = sh_degree;
    g.position = Vec3(0.1 * i, -0.2, 0.3);
    g.rotation = Vec4(0.9, 0.1, -0.2, 0.3).normalized();
    g.log_scales = Vec3(-2.0, -2.5, -3.0);
    g.opacity_logit = 0.25 * i;
    g.sh[0] = Vec3(0.1, 0.2, 0.3);
    g.sh[1] = Vec3(-0.1, 0.0, 0.1);
    DoGParams d;
    d.active = i == 1;
    scene.push_back(g, d);
  }
  return scene;
}

TEST(LearningRates, PositionDecaysLogLinearly) {
  LearningRates r;
  EXPECT_NEAR(r.position_at(0), 1.6e-4, 1e-18);
  EXPECT_NEAR(r.position_at(30000), 1.6e-6, 1e-18);
  EXPECT_NEAR(r.position_at(15000), std::sqrt(1.6e-4 * 1.6e-6), 1e-15);
  EXPECT_NEAR(r.position_at(90000), 1.6e-6, 1e-18);
  r.spatial_scale = 2.0;
  EXPECT_NEAR(r.position_at(0), 3.2e-4, 1e-18);
}

TEST(LearningRates, Defaults) {
  const LearningRates r;
  EXPECT_EQ(r.for_group(ParamGroup::OpacityLogit, 0), 5e-2);
  EXPECT_EQ(r.for_group(ParamGroup::LogScale, 0), 5e-3);
  EXPECT_EQ(r.for_group(ParamGroup::Rotation, 0), 1e-3);
  EXPECT_EQ(r.for_group(ParamGroup::ShDc, 0), 2.5e-3);
  EXPECT_EQ(r.for_group(ParamGroup::DogAlphaLatent, 0), 5e-3);
  EXPECT_EQ(r.for_group(ParamGroup::DogScaleLatent, 0), 5e-3);
}

TEST(AdamOptimizer, ZeroGradientsLeaveParametersUnchanged) {
  SceneModel scene = two_primitives();
  const SceneModel before = scene;
  AdamOptimizer opt(LearningRates{}, scene.sh_degree());
  const ParamArrays zero = ParamArrays::zeros(scene.size(), scene.sh_degree());
  for (int it = 1; it <= 10; ++it) opt.step(scene, zero, it);
  for (ParamGroup g : kAllParamGroups) {
    const auto& a = scene.params().group(g);
    const auto& b = before.params().group(g);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-15) << param_group_name(g);
  }
  EXPECT_EQ(opt.group_steps(ParamGroup::OpacityLogit), 10);
}

TEST(AdamOptimizer, QuadraticConverges) {
  SceneModel scene(0);
  scene.push_back(GaussianParams{});
  AdamOptimizer opt(LearningRates{}, 0);
  const double target = 3.0;
  int converged_at = -1;
  for (int it = 1; it <= 2000; ++it) {
    ParamArrays g = ParamArrays::zeros(1, 0);
    g.opacity_logit[0] = 2.0 * (scene.params().opacity_logit[0] - target);
    opt.step(scene, g, it);
    if (converged_at < 0 && std::abs(scene.params().opacity_logit[0] - target) < 1e-4) converged_at = it;
  }
  EXPECT_GT(converged_at, 0);
  EXPECT_NEAR(scene.params().opacity_logit[0], target, 1e-4);
}

TEST(AdamOptimizer, InactiveDogLatentsFrozen) {
  SceneModel scene = two_primitives();
  AdamOptimizer opt(LearningRates{}, scene.sh_degree());
  ParamArrays g = ParamArrays::zeros(scene.size(), scene.sh_degree());
  g.dog_alpha.assign(2, 1.0);
  g.dog_scale.assign(6, 1.0);
  opt.step(scene, g, 1);
  EXPECT_EQ(scene.params().dog_alpha[0], 0.0);
  EXPECT_LT(scene.params().dog_alpha[1], 0.0);
  EXPECT_EQ(scene.params().dog_scale[0], 0.0);
  EXPECT_LT(scene.params().dog_scale[3], 0.0);
}

TEST(AdamOptimizer, RotationsStayNormalized) {
  SceneModel scene = two_primitives();
  AdamOptimizer opt(LearningRates{}, scene.sh_degree());
  ParamArrays g = ParamArrays::zeros(scene.size(), scene.sh_degree());
  for (double& v : g.rotation) v = 5.0;
  opt.step(scene, g, 1);
  for (std::size_t i = 0; i < scene.size(); ++i) EXPECT_NEAR(scene.gaussian(i).rotation.norm(), 1.0, 1e-12);
}

TEST(AdamOptimizer, CompactionKeepsMomentsAligned) {
  SceneModel scene(0);
  for (int i = 0; i < 5; ++i) scene.push_back(GaussianParams{});
  AdamOptimizer opt(LearningRates{}, 0);
  ParamArrays g = ParamArrays::zeros(5, 0);
  for (int i = 0; i < 5; ++i) g.opacity_logit[i] = i + 1.0;
  opt.step(scene, g, 1);
  const auto m = opt.first_moment().opacity_logit;
  const auto v = opt.second_moment().opacity_logit;
  const std::vector<std::size_t> keep = {1, 4};
  scene.compact(keep);
  opt.compact(keep);
  EXPECT_EQ(opt.first_moment().opacity_logit, (std::vector<double>{m[1], m[4]}));
  EXPECT_EQ(opt.second_moment().opacity_logit, (std::vector<double>{v[1], v[4]}));
  EXPECT_EQ(opt.first_moment().position.size(), 6u);

  // continuing after compaction equals continuing with the kept moments
  SceneModel twin = scene;
  AdamOptimizer fresh(LearningRates{}, 0);
  ParamArrays g2 = ParamArrays::zeros(2, 0);
  g2.opacity_logit = {1.0, 1.0};
  opt.step(scene, g2, 2);
  fresh.step(twin, g2, 2);
  EXPECT_NE(scene.params().opacity_logit, twin.params().opacity_logit);
}

}  // namespace
}  // namespace dogsplat
