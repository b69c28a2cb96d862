#include "dogsplat/errors.hpp"
#include "dogsplat/io/ply.hpp"
#include "dogsplat/synthetic.hpp"
#include "dogsplat/trainer.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace dogsplat {
namespace {

SyntheticOptions tiny_options() {
  SyntheticOptions o;
  o.seed = 4;
  o.gaussians = 10;
  o.views = 3;
  o.resolution = 24;
  return o;
}

TrainConfig tiny_config(Variant v) {
  TrainConfig c;
  c.variant = v;
  c.total_iters = 160;
  c.prune_start_iter = 20;
  c.check_period = 10;
  c.iter_max = 20;
  c.prune_phase_max_iters = 120;
  c.n_target = 10;
  c.recovery_iters = 20;
  c.rates.position_decay_steps = 160;
  return c;
}

Dataset shifted(const Dataset& d, std::vector<double> offsets) {
  Dataset out = d;
  for (std::size_t v = 0; v < out.size(); ++v)
    for (double& x : out.images[v].rgb) x += offsets[v];
  return out;
}

TEST(FullTrainL1, Examples) {
  const SyntheticScene s = make_synthetic_scene(tiny_options());
  EXPECT_EQ(full_train_l1(s.gt, s.train), 0.0);

  Dataset one = s.train;
  one.cameras.resize(1);
  one.images.resize(1);
  one.names.resize(1);
  EXPECT_NEAR(full_train_l1(s.gt, shifted(one, {0.1})), 0.1, 1e-12);

  Dataset two = s.train;
  two.cameras.resize(2);
  two.images.resize(2);
  two.names.resize(2);
  EXPECT_NEAR(full_train_l1(s.gt, shifted(two, {0.1, -0.3})), 0.2, 1e-12);

  EXPECT_THROW(full_train_l1(s.gt, Dataset{}), EmptyDataset);
}

TEST(Evaluate, GroundTruthSaturates) {
  const SyntheticScene s = make_synthetic_scene(tiny_options());
  const MetricsReport m = evaluate(s.gt, s.train);
  EXPECT_EQ(m.psnr, 99.0);
  EXPECT_NEAR(m.ssim, 1.0, 1e-12);
  EXPECT_EQ(m.l1, 0.0);
  EXPECT_EQ(m.n_primitives, 10u);
}

TEST(Synthetic, Deterministic) {
  const SyntheticScene a = make_synthetic_scene(tiny_options());
  const SyntheticScene b = make_synthetic_scene(tiny_options());
  EXPECT_EQ(a.gt, b.gt);
  ASSERT_EQ(a.train.size(), 3u);
  for (std::size_t v = 0; v < a.train.size(); ++v) EXPECT_EQ(a.train.images[v].rgb, b.train.images[v].rgb);
  SyntheticOptions other = tiny_options();
  other.seed = 5;
  EXPECT_FALSE(make_synthetic_scene(other).gt == a.gt);
}

TEST(Synthetic, SingleGaussianVisibleInEveryView) {
  SyntheticOptions o = tiny_options();
  o.gaussians = 1;
  o.views = 6;
  const SyntheticScene s = make_synthetic_scene(o);
  for (const ImageBuffer& img : s.train.images) {
    int lit = 0;
    for (double v : img.rgb) lit += v != 0.0;
    EXPECT_GT(lit, 0);
  }
}

TEST(Synthetic, RejectsBadCounts) {
  SyntheticOptions o = tiny_options();
  o.gaussians = 0;
  EXPECT_THROW(make_synthetic_scene(o), RangeError);
  o = tiny_options();
  o.views = 1;
  EXPECT_THROW(make_synthetic_scene(o), RangeError);
}

TEST(Synthetic, PlyRoundTripRerendersIdentically) {
  const SyntheticScene s = make_synthetic_scene(tiny_options());
  std::ostringstream out;
  write_ply(s.gt, out);
  const std::string bytes = out.str();
  const SceneModel back = read_ply(std::vector<char>(bytes.begin(), bytes.end()));
  EXPECT_EQ(back, s.gt);
  for (std::size_t v = 0; v < s.train.size(); ++v)
    EXPECT_EQ(render_tiled(back, s.train.cameras[v]).rgb, s.train.images[v].rgb);
}

TEST(Variant, Flags) {
  EXPECT_EQ(parse_variant("v1"), Variant::V1);
  EXPECT_EQ(parse_variant("full"), Variant::Full);
  EXPECT_THROW(parse_variant("v4"), RangeError);
  const VariantFlags v1 = variant_flags(Variant::V1);
  EXPECT_FALSE(v1.dynamic_ratio || v1.sps || v1.dog);
  const VariantFlags v3 = variant_flags(Variant::V3);
  EXPECT_TRUE(v3.dynamic_ratio && v3.sps && !v3.dog);
  const VariantFlags full = variant_flags(Variant::Full);
  EXPECT_TRUE(full.dynamic_ratio && full.sps && full.dog);
}

int count_events(const TrainResult& r, CurveEvent e) {
  int n = 0;
  for (const CurveRow& row : r.curve) n += row.event == e;
  return n;
}

TEST(Train, V1RemovesEqualCountsByOpacity) {
  const SyntheticScene s = make_synthetic_scene(tiny_options());
  const SceneModel init = jittered_init(s.gt, 3, 1);
  const TrainResult r = train(tiny_config(Variant::V1), s.train, init);
  ASSERT_EQ(r.prunes.size(), 5u);
  for (const PruneLog& p : r.prunes) {
    EXPECT_EQ(p.before - p.after, 4u);
    EXPECT_EQ(p.ranking, PruneRanking::Opacity);
  }
  EXPECT_EQ(r.scene.size(), 10u);
  EXPECT_EQ(r.scene.dog_count(), 0u);
  EXPECT_EQ(count_events(r, CurveEvent::ActivateDoG), 0);
}

TEST(Train, FullVariantCurve) {
  const SyntheticScene s = make_synthetic_scene(tiny_options());
  const SceneModel init = jittered_init(s.gt, 3, 1);
  std::vector<CurveRow> streamed;
  const TrainResult r =
      train(tiny_config(Variant::Full), s.train, init, [&](const CurveRow& row) { streamed.push_back(row); });
  EXPECT_EQ(streamed, r.curve);
  EXPECT_EQ(count_events(r, CurveEvent::ActivateDoG), 1);
  EXPECT_EQ(count_events(r, CurveEvent::Finish), 1);
  EXPECT_EQ(r.curve.back().event, CurveEvent::Finish);
  EXPECT_EQ(r.scene.size(), 10u);
  for (const PruneLog& p : r.prunes) EXPECT_EQ(p.ranking, PruneRanking::Sps);

  std::size_t prev = init.size();
  long long prev_iter = 0;
  for (const CurveRow& row : r.curve) {
    EXPECT_LE(row.n_primitives, prev);
    EXPECT_GE(row.iter, prev_iter);
    prev = row.n_primitives;
    prev_iter = row.iter;
  }
  // one training row per iteration
  int none_rows = 0;
  for (const CurveRow& row : r.curve) none_rows += row.event == CurveEvent::None;
  EXPECT_EQ(none_rows, 160);
}

TEST(Train, TargetAtN0ActivatesAfterWarmup) {
  const SyntheticScene s = make_synthetic_scene(tiny_options());
  const SceneModel init = jittered_init(s.gt, 1, 1);
  TrainConfig c = tiny_config(Variant::Full);
  c.n_target = static_cast<long long>(init.size());
  const TrainResult r = train(c, s.train, init);
  EXPECT_TRUE(r.prunes.empty());
  EXPECT_EQ(count_events(r, CurveEvent::Prune), 0);
  long long activated_at = -1;
  for (const CurveRow& row : r.curve)
    if (row.event == CurveEvent::ActivateDoG) activated_at = row.iter;
  EXPECT_EQ(activated_at, c.prune_start_iter);
}

TEST(Train, DeterministicAcrossThreadCounts) {
  const SyntheticScene s = make_synthetic_scene(tiny_options());
  const SceneModel init = jittered_init(s.gt, 2, 1);
  TrainConfig c = tiny_config(Variant::Full);
  c.total_iters = 60;
  c.threads = 1;
  const TrainResult a = train(c, s.train, init);
  c.threads = 3;
  const TrainResult b = train(c, s.train, init);
  EXPECT_EQ(a.scene, b.scene);
  EXPECT_EQ(a.curve, b.curve);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.prune_target_ratio = 1.5;
  EXPECT_THROW(c.validate(), RangeError);
  c = TrainConfig{};
  c.lambda_dssim = -0.1;
  EXPECT_THROW(c.validate(), RangeError);
  c = TrainConfig{};
  c.dog_falpha_init = 1.0;
  EXPECT_THROW(c.validate(), RangeError);
}

}  // namespace
}  // namespace dogsplat
