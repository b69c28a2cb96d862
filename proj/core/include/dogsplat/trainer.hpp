#pragma once

#include "dogsplat/dataset.hpp"
#include "dogsplat/dog_control.hpp"
#include "dogsplat/io/curve.hpp"
#include "dogsplat/optimizer.hpp"
#include "dogsplat/scene.hpp"
#include "dogsplat/scheduler.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dogsplat {

/// Ablation ladder. Each step adds one component to the previous one.
enum class Variant {
  V1,    // L1-gated pruning rounds, uniform per-round counts, opacity ranking
  V2,    // + geometric per-round counts
  V3,    // + spatio-spectral ranking
  Full,  // + DoG activation and degeneration
};

struct VariantFlags {
  bool dynamic_ratio = false;
  bool sps = false;
  bool dog = false;
};

VariantFlags variant_flags(Variant v);
const char* variant_name(Variant v);
/// Throws RangeError for anything but v1, v2, v3 or full.
Variant parse_variant(const std::string& name);

enum class PruneRanking { Auto, Opacity, Sps, Random };
const char* prune_ranking_name(PruneRanking r);
PruneRanking parse_prune_ranking(const std::string& name);

struct TrainConfig {
  int total_iters = 30000;
  int prune_start_iter = 15000;
  int check_period = 500;
  int iter_max = 2000;
  double beta = 0.95;
  int prune_phase_max_iters = 10000;
  double prune_target_ratio = 0.9;
  long long n_target = -1;
  double min_prune_count = -1.0;
  int uniform_rounds = 5;

  double lambda_dssim = 0.2;
  LearningRates rates;

  double lambda_s = 0.5;
  double lambda_f = 0.5;
  double gamma_f = 1.0;
  PruneRanking prune_ranking = PruneRanking::Auto;

  double f_s_max = kDefaultScaleFactorMax;
  double dog_f_init = 0.5;
  double dog_falpha_init = 0.1;
  double degrade_threshold = 0.01;
  DegradeRule degrade_rule = DegradeRule::AlphaFactor;
  /// Logs an evaluation this many iterations after DoG activation.
  int recovery_iters = 200;

  Variant variant = Variant::Full;
  std::uint64_t seed = 0;
  int sh_degree = 0;
  double background = 0.0;
  int threads = 0;

  /// Random initialization used when no starting model is given.
  int init_count = 300;
  double init_extent = 0.5;
  double init_scale = 0.05;
  double init_opacity = 0.1;

  /// Throws RangeError when a field is outside its domain.
  void validate() const;
  SchedulerConfig scheduler() const;
};

struct MetricsReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double l1 = 0.0;
  std::size_t n_primitives = 0;
  std::size_t n_dog = 0;
  double wall_seconds = 0.0;
};

/// Mean over views of the per-pixel L1 between renders and images.
/// Throws EmptyDataset.
double full_train_l1(const SceneModel& scene, const Dataset& data, const RenderOptions& options = {});

/// Mean per-view PSNR / SSIM / L1 on images clamped to [0, 1].
/// Throws DimensionMismatch when cameras and images disagree.
MetricsReport evaluate(const SceneModel& scene, const Dataset& data, const RenderOptions& options = {});

struct PruneLog {
  int iter = 0;
  std::size_t before = 0;
  std::size_t after = 0;
  double ratio = 0.0;
  bool forced = false;
  PruneRanking ranking = PruneRanking::Opacity;
};

struct TrainResult {
  SceneModel scene;
  std::vector<CurveRow> curve;
  std::vector<PruneLog> prunes;
  double wall_seconds = 0.0;
};

using CurveSink = std::function<void(const CurveRow&)>;

/// Runs the full schedule from `init`. Every curve row is also passed to
/// `sink` as soon as it is produced.
TrainResult train(const TrainConfig& config, const Dataset& data, SceneModel init, const CurveSink& sink = {});

/// Random starting scene from the config's init_* fields.
SceneModel initial_scene(const TrainConfig& config);

RenderOptions render_options(const TrainConfig& config);

}  // namespace dogsplat
