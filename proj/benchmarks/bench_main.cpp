#include "dogsplat/image_metrics.hpp"
#include "dogsplat/pruning.hpp"
#include "dogsplat/rasterizer.hpp"
#include "dogsplat/spectral.hpp"

#include "fixtures.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace ds = dogsplat;

namespace {

ds::SceneModel bench_scene(int count) {
  std::mt19937_64 rng(1);
  ds::testing::RandomSceneOptions o;
  o.count = count;
  o.spread = 0.9;
  return ds::testing::random_scene(rng, o);
}

void BM_RenderTiled(benchmark::State& state) {
  const ds::SceneModel scene = bench_scene(static_cast<int>(state.range(0)));
  const ds::Camera cam = ds::testing::front_camera(128, 128);
  for (auto _ : state) benchmark::DoNotOptimize(ds::render_tiled(scene, cam));
  state.SetItemsProcessed(state.iterations() * 128 * 128);
}
BENCHMARK(BM_RenderTiled)->Arg(100)->Arg(1000);

void BM_RenderNaive(benchmark::State& state) {
  const ds::SceneModel scene = bench_scene(static_cast<int>(state.range(0)));
  const ds::Camera cam = ds::testing::front_camera(128, 128);
  for (auto _ : state) benchmark::DoNotOptimize(ds::render_naive(scene, cam));
}
BENCHMARK(BM_RenderNaive)->Arg(100);

void BM_Backward(benchmark::State& state) {
  const ds::SceneModel scene = bench_scene(static_cast<int>(state.range(0)));
  const ds::Camera cam = ds::testing::front_camera(128, 128);
  std::mt19937_64 rng(2);
  const ds::ImageBuffer adjoint = ds::testing::random_adjoint(rng, 128, 128);
  for (auto _ : state) benchmark::DoNotOptimize(ds::backward(scene, cam, adjoint));
}
BENCHMARK(BM_Backward)->Arg(100)->Arg(1000);

void BM_ImageLoss(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const ds::ImageBuffer a = ds::testing::random_adjoint(rng, 128, 128);
  const ds::ImageBuffer b = ds::testing::random_adjoint(rng, 128, 128);
  for (auto _ : state) benchmark::DoNotOptimize(ds::image_loss(a, b));
}
BENCHMARK(BM_ImageLoss);

void BM_SpectralFiltered(benchmark::State& state) {
  const ds::SceneModel scene = bench_scene(static_cast<int>(state.range(0)));
  const ds::Camera cam = ds::testing::front_camera(64, 64);
  const auto fields = ds::opacity_gradient_fields(scene, cam);
  const ds::SpectralFilter filter(ds::radial_weights(64, 64, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(ds::spectral_score_filtered(fields, filter));
}
BENCHMARK(BM_SpectralFiltered)->Arg(50)->Arg(300);

void BM_SpectralDirect(benchmark::State& state) {
  const ds::SceneModel scene = bench_scene(static_cast<int>(state.range(0)));
  const ds::Camera cam = ds::testing::front_camera(64, 64);
  const auto fields = ds::opacity_gradient_fields(scene, cam);
  const auto weights = ds::radial_weights(64, 64, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ds::spectral_score_direct(fields, weights));
}
BENCHMARK(BM_SpectralDirect)->Arg(50);

void BM_AccumulateScores(benchmark::State& state) {
  const ds::SceneModel scene = bench_scene(300);
  const std::vector<ds::Camera> views(8, ds::testing::front_camera(64, 64));
  for (auto _ : state) benchmark::DoNotOptimize(ds::accumulate_scores(scene, views));
}
BENCHMARK(BM_AccumulateScores)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
