#include "dogsplat/trainer.hpp"

#include "dogsplat/errors.hpp"
#include "dogsplat/image_metrics.hpp"
#include "dogsplat/pruning.hpp"
#include "dogsplat/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <random>

namespace dogsplat {

VariantFlags variant_flags(Variant v) {
  switch (v) {
    case Variant::V1: return {false, false, false};
    case Variant::V2: return {true, false, false};
    case Variant::V3: return {true, true, false};
    case Variant::Full: return {true, true, true};
  }
  return {};
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::V1: return "v1";
    case Variant::V2: return "v2";
    case Variant::V3: return "v3";
    case Variant::Full: return "full";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::V1, Variant::V2, Variant::V3, Variant::Full})
    if (name == variant_name(v)) return v;
  throw RangeError("unknown variant '" + name + "' (expected v1, v2, v3 or full)");
}

const char* prune_ranking_name(PruneRanking r) {
  switch (r) {
    case PruneRanking::Auto: return "auto";
    case PruneRanking::Opacity: return "opacity";
    case PruneRanking::Sps: return "sps";
    case PruneRanking::Random: return "random";
  }
  return "?";
}

PruneRanking parse_prune_ranking(const std::string& name) {
  for (PruneRanking r : {PruneRanking::Auto, PruneRanking::Opacity, PruneRanking::Sps, PruneRanking::Random})
    if (name == prune_ranking_name(r)) return r;
  throw RangeError("unknown prune_ranking '" + name + "' (expected auto, opacity, sps or random)");
}

void TrainConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw RangeError(std::string(name) + " must be positive");
  };
  positive(rates.position_init, "lr_position_init");
  positive(rates.position_final, "lr_position_final");
  positive(rates.position_decay_steps, "lr_position_decay_steps");
  positive(rates.spatial_scale, "spatial_scale");
  positive(rates.opacity, "lr_opacity");
  positive(rates.scale, "lr_scale");
  positive(rates.rotation, "lr_rotation");
  positive(rates.color, "lr_color");
  positive(rates.color_rest, "lr_color_rest");
  positive(rates.dog, "lr_dog");
  if (!(prune_target_ratio > 0.0 && prune_target_ratio < 1.0))
    throw RangeError("prune_target_ratio must lie in (0, 1)");
  if (!(lambda_dssim >= 0.0 && lambda_dssim <= 1.0)) throw RangeError("lambda_dssim must lie in [0, 1]");
  if (!(lambda_s >= 0.0) || !(lambda_f >= 0.0)) throw RangeError("lambda_s and lambda_f must be non-negative");
  positive(gamma_f, "gamma_f");
  positive(f_s_max, "f_s_max");
  if (!(dog_f_init > 0.0 && dog_f_init < f_s_max)) throw RangeError("dog_f_init must lie in (0, f_s_max)");
  if (!(dog_falpha_init > 0.0 && dog_falpha_init < 1.0)) throw RangeError("dog_falpha_init must lie in (0, 1)");
  if (!(degrade_threshold >= 0.0 && degrade_threshold < 1.0))
    throw RangeError("degrade_threshold must lie in [0, 1)");
  if (recovery_iters < 0) throw RangeError("recovery_iters must be non-negative");
  if (total_iters < 1) throw RangeError("total_iters must be positive");
  if (sh_degree < 0 || sh_degree > kMaxShDegree) throw RangeError("sh_degree must lie in [0, 2]");
  if (threads < 0) throw RangeError("threads must be non-negative");
  if (init_count < 1) throw RangeError("init_count must be positive");
  positive(init_extent, "init_extent");
  positive(init_scale, "init_scale");
  if (!(init_opacity > 0.0 && init_opacity < 1.0)) throw RangeError("init_opacity must lie in (0, 1)");
  scheduler().validate();
}

SchedulerConfig TrainConfig::scheduler() const {
  SchedulerConfig s;
  s.prune_start_iter = prune_start_iter;
  s.total_iters = total_iters;
  s.check_period = check_period;
  s.iter_max = iter_max;
  s.beta = beta;
  s.n_target = n_target;
  s.target_ratio = prune_target_ratio;
  s.prune_phase_max_iters = prune_phase_max_iters;
  s.min_prune_count = min_prune_count;
  s.uniform_rounds = uniform_rounds;
  const VariantFlags f = variant_flags(variant);
  s.dynamic_ratio = f.dynamic_ratio;
  s.dog_enabled = f.dog;
  return s;
}

RenderOptions render_options(const TrainConfig& config) {
  RenderOptions o;
  o.background = Vec3::Constant(config.background);
  o.threads = config.threads;
  return o;
}

SceneModel initial_scene(const TrainConfig& config) {
  SceneModel base = random_init(config.seed, config.init_count, config.init_extent, config.init_scale,
                                config.init_opacity);
  SceneModel out(config.sh_degree, config.f_s_max);
  for (std::size_t i = 0; i < base.size(); ++i) out.push_back(base.gaussian(i));
  return out;
}

double full_train_l1(const SceneModel& scene, const Dataset& data, const RenderOptions& options) {
  if (data.empty()) throw EmptyDataset("dataset has no views");
  if (data.images.size() != data.cameras.size()) throw DimensionMismatch("cameras and images differ in count");
  double sum = 0.0;
  for (std::size_t v = 0; v < data.size(); ++v) sum += l1_error(render_tiled(scene, data.cameras[v], options), data.images[v]);
  return sum / static_cast<double>(data.size());
}

MetricsReport evaluate(const SceneModel& scene, const Dataset& data, const RenderOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (data.images.size() != data.cameras.size()) throw DimensionMismatch("cameras and images differ in count");
  MetricsReport r;
  r.n_primitives = scene.size();
  r.n_dog = scene.dog_count();
  if (!data.empty()) {
    for (std::size_t v = 0; v < data.size(); ++v) {
      const ImageBuffer render = clamped(render_tiled(scene, data.cameras[v], options));
      const ImageBuffer gt = clamped(data.images[v]);
      r.psnr += psnr(render, gt);
      r.ssim += ssim(render, gt);
      r.l1 += l1_error(render, gt);
    }
    const double n = static_cast<double>(data.size());
    r.psnr /= n;
    r.ssim /= n;
    r.l1 /= n;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

SceneModel conform(const SceneModel& init, const TrainConfig& config) {
  if (init.sh_degree() == config.sh_degree && init.scale_factor_max() == config.f_s_max) return init;
  SceneModel out(config.sh_degree, config.f_s_max);
  for (std::size_t i = 0; i < init.size(); ++i) {
    DoGParams d = init.dog(i);
    d.scale_max = config.f_s_max;
    out.push_back(init.gaussian(i), d);
    out.set_dog_active(i, init.dog_active(i));
  }
  return out;
}

class Run {
 public:
  Run(const TrainConfig& config, const Dataset& data, SceneModel init, const CurveSink& sink)
      : config_(config),
        data_(data),
        sink_(sink),
        render_(render_options(config)),
        scheduler_(config.scheduler()),
        optimizer_(config.rates, config.sh_degree),
        rng_(config.seed ^ 0x9e3779b97f4a7c15ULL) {
    result_.scene = conform(init, config);
    optimizer_.resize(result_.scene.size());
  }

  TrainResult run() {
    const auto start = std::chrono::steady_clock::now();
    SceneModel& scene = result_.scene;
    const bool dog = variant_flags(config_.variant).dog;
    std::vector<std::size_t> order(data_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int iter = 1; iter <= config_.total_iters; ++iter) {
      const std::size_t slot = static_cast<std::size_t>(iter - 1) % order.size();
      if (slot == 0) std::shuffle(order.begin(), order.end(), rng_);
      const std::size_t v = order[slot];

      const RenderFrame frame(scene, data_.cameras[v], render_);
      const ImageBuffer image = render_tiled(frame);
      const LossValue loss = image_loss(image, data_.images[v], config_.lambda_dssim);
      const GradientBundle grads = backward(scene, frame, loss.adjoint);
      optimizer_.step(scene, grads.params, iter);

      if (dog && scheduler_.phase() == Phase::DoGRefine) {
        if (degrade_step(scene, config_.degrade_threshold, config_.degrade_rule) > 0)
          emit(iter, eval_l1(), CurveEvent::Degrade);
      }
      emit(iter, loss.l1, psnr(clamped(image), clamped(data_.images[v])), CurveEvent::None);
      if (recovery_iter_ && iter == *recovery_iter_) emit(iter, eval_l1(), CurveEvent::Eval);

      Action a = scheduler_.step(iter, scene.size());
      if (a.kind == Action::Kind::EvaluateL1) {
        const double l1 = eval_l1();
        emit(iter, l1, CurveEvent::Eval);
        a = scheduler_.step(iter, scene.size(), l1);
      }
      if (a.kind == Action::Kind::Prune) {
        prune(iter, a);
      } else if (a.kind == Action::Kind::ActivateDoG) {
        if (result_.curve.back().event != CurveEvent::Eval) emit(iter, eval_l1(), CurveEvent::Eval);
        activate_dog(scene, DoGInit{config_.dog_f_init, config_.dog_falpha_init}, &optimizer_);
        emit(iter, eval_l1(), CurveEvent::ActivateDoG);
        recovery_iter_ = iter + config_.recovery_iters;
      } else if (a.kind == Action::Kind::Finish) {
        emit(iter, eval_l1(), CurveEvent::Finish);
      }
    }
    result_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(result_);
  }

 private:
  double eval_l1() {
    last_psnr_ = 0.0;
    double l1 = 0.0;
    for (std::size_t v = 0; v < data_.size(); ++v) {
      const ImageBuffer img = render_tiled(result_.scene, data_.cameras[v], render_);
      l1 += l1_error(img, data_.images[v]);
      last_psnr_ += psnr(clamped(img), clamped(data_.images[v]));
    }
    last_psnr_ /= static_cast<double>(data_.size());
    return l1 / static_cast<double>(data_.size());
  }

  void emit(int iter, double l1, CurveEvent event) { emit(iter, l1, last_psnr_, event); }

  void emit(int iter, double l1, double psnr_value, CurveEvent event) {
    CurveRow row{iter, result_.scene.size(), result_.scene.dog_count(), l1, psnr_value, event};
    result_.curve.push_back(row);
    if (sink_) sink_(row);
  }

  PruneRanking ranking() const {
    if (config_.prune_ranking != PruneRanking::Auto) return config_.prune_ranking;
    return variant_flags(config_.variant).sps ? PruneRanking::Sps : PruneRanking::Opacity;
  }

  void prune(int iter, const Action& a) {
    SceneModel& scene = result_.scene;
    const std::size_t before = scene.size();
    if (a.target_count >= before) return;
    const std::size_t k = before - a.target_count;
    PruneRanking used = ranking();
    std::vector<double> scores;
    if (used == PruneRanking::Sps) {
      ScoreOptions so;
      so.gamma_f = config_.gamma_f;
      so.render = render_;
      const ScoreVector sv = accumulate_scores(scene, data_.cameras, so);
      try {
        scores = combine_sps(sv, config_.lambda_s, config_.lambda_f);
      } catch (const AllZeroScores&) {
        used = PruneRanking::Opacity;
      }
    }
    if (used == PruneRanking::Random) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      scores.resize(before);
      for (double& s : scores) s = u(rng_);
    }
    if (used == PruneRanking::Opacity) scores = activated_opacities(scene);
    const auto removed = lowest_k(scores, k);
    remove_primitives(scene, removed, &optimizer_);
    result_.prunes.push_back(PruneLog{iter, before, scene.size(), a.ratio, a.forced, used});
    emit(iter, eval_l1(), CurveEvent::Prune);
  }

  const TrainConfig& config_;
  const Dataset& data_;
  const CurveSink& sink_;
  RenderOptions render_;
  PruningScheduler scheduler_;
  AdamOptimizer optimizer_;
  std::mt19937_64 rng_;
  TrainResult result_;
  double last_psnr_ = 0.0;
  std::optional<int> recovery_iter_;
};

}  // namespace

TrainResult train(const TrainConfig& config, const Dataset& data, SceneModel init, const CurveSink& sink) {
  config.validate();
  if (data.empty()) throw EmptyDataset("dataset has no views");
  if (data.images.size() != data.cameras.size()) throw DimensionMismatch("cameras and images differ in count");
  if (init.empty()) throw RangeError("initial scene is empty");
  Run run(config, data, std::move(init), sink);
  return run.run();
}

}  // namespace dogsplat
