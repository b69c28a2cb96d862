// Acceptance harness: one PASS/FAIL line per criterion. Pass criterion
// numbers as arguments to run a subset.

#include "dogsplat/dog_control.hpp"
#include "dogsplat/errors.hpp"
#include "dogsplat/io/config.hpp"
#include "dogsplat/io/curve.hpp"
#include "dogsplat/io/ply.hpp"
#include "dogsplat/io/png.hpp"
#include "dogsplat/pruning.hpp"
#include "dogsplat/rasterizer.hpp"
#include "dogsplat/scheduler.hpp"
#include "dogsplat/spectral.hpp"
#include "dogsplat/synthetic.hpp"
#include "dogsplat/trainer.hpp"

#include "fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ds = dogsplat;
using ds::Vec3;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ds::SceneModel mixed_scene(std::mt19937_64& rng, int count, double fmax, int sh_degree) {
  ds::testing::RandomSceneOptions o;
  o.count = count;
  o.scale_factor_max = fmax;
  o.sh_degree = sh_degree;
  return ds::testing::random_scene(rng, o);
}

Outcome gradient_parity() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::size_t checked = 0, failures = 0, masked = 0;
  double worst = 0.0;
  std::string first_failure;
  const int scenes = 20;
  for (int s = 0; s < scenes; ++s) {
    const int count = 3 + s % 8;  // 3..10
    const ds::SceneModel scene = mixed_scene(rng, count, s % 2 ? 2.0 : 1.0, s % 3 == 0 ? 1 : 0);
    const ds::Camera cam = ds::testing::front_camera(32, 32);
    ds::RenderOptions opts;
    opts.background = Vec3(0.1, 0.2, 0.3);
    const auto adjoint = ds::testing::random_adjoint(rng, 32, 32);
    const auto stats = ds::testing::gradient_check(scene, cam, adjoint, opts);
    checked += stats.checked;
    failures += stats.failures;
    masked += stats.masked;
    worst = std::max(worst, stats.worst_relative);
    if (!stats.messages.empty() && first_failure.empty()) first_failure = " first: " + stats.messages.front();
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 60.0,
          fmt("%d scenes, %zu latents checked, %zu failures, worst rel %.2e, %zu stencils masked, %.1fs", scenes, checked,
              failures, worst, masked, secs) +
              first_failure};
}

Outcome rasterizer_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    ds::testing::RandomSceneOptions o;
    o.count = 10 + s % 40;
    o.spread = 0.9;
    o.scale_factor_max = s % 2 ? 2.0 : 1.0;
    const ds::SceneModel scene = ds::testing::random_scene(rng, o);
    const ds::Camera cam = ds::testing::front_camera(64, 64);
    const auto a = ds::render_tiled(scene, cam);
    const auto b = ds::render_naive(scene, cam);
    for (std::size_t i = 0; i < a.rgb.size(); ++i) worst = std::max(worst, std::abs(a.rgb[i] - b.rgb[i]));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 60.0, fmt("100 scenes at 64x64, max |tiled - naive| = %.3g, %.1fs", worst, secs)};
}

Outcome dog_degeneration() {
  std::mt19937_64 rng(5);
  int mismatches = 0;
  int cases = 0;
  for (int s = 0; s < 20; ++s) {
    ds::testing::RandomSceneOptions o;
    o.count = 12;
    o.dog_fraction = 0.0;
    o.sh_degree = s % 2;
    const ds::SceneModel vanilla = ds::testing::random_scene(rng, o);
    const ds::Camera cam = ds::testing::front_camera(48, 40);
    const auto ref_tiled = ds::render_tiled(vanilla, cam);
    const auto ref_naive = ds::render_naive(vanilla, cam);

    // f_alpha = 0 with random pseudo scales
    ds::SceneModel zero = vanilla;
    ds::activate_dog(zero);
    std::uniform_real_distribution<double> u(-2, 2);
    for (std::size_t i = 0; i < zero.size(); ++i) {
      for (int k = 0; k < 3; ++k) zero.params().dog_scale[3 * i + k] = u(rng);
      zero.params().dog_alpha[i] = -std::numeric_limits<double>::infinity();
    }
    // inactive flag with arbitrary latents
    ds::SceneModel off = zero;
    for (std::size_t i = 0; i < off.size(); ++i) {
      off.params().dog_alpha[i] = u(rng);
      off.set_dog_active(i, false);
    }
    // degrade_step turning every DoG off
    ds::SceneModel degraded = vanilla;
    ds::activate_dog(degraded);
    for (std::size_t i = 0; i < degraded.size(); ++i) degraded.params().dog_alpha[i] = ds::logit(0.001);
    if (ds::degrade_step(degraded) != degraded.size()) ++mismatches;

    for (const ds::SceneModel* m : {&zero, &off, &degraded}) {
      cases += 2;
      if (ds::render_tiled(*m, cam).rgb != ref_tiled.rgb) ++mismatches;
      if (ds::render_naive(*m, cam).rgb != ref_naive.rgb) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("%d renders compared bitwise against the vanilla scene, %d mismatches", cases, mismatches)};
}

Outcome spectral_equivalence() {
  std::mt19937_64 rng(31);
  double worst_filtered = 0.0, worst_parseval = 0.0;
  int scenes = 0;
  for (int s = 0; s < 20; ++s) {
    const int w = s % 4 == 3 ? 40 : 32;
    const int h = s % 4 == 3 ? 24 : 32;
    const ds::SceneModel scene = mixed_scene(rng, 2 + s % 7, s % 2 ? 2.0 : 1.0, 0);
    const ds::Camera cam = ds::testing::front_camera(w, h);
    const auto fields = ds::opacity_gradient_fields(scene, cam);
    const int pw = ds::scoring_extent(w), ph = ds::scoring_extent(h);
    const ds::SpectralFilter radial(ds::radial_weights(ph, pw, 1.0 + 0.25 * (s % 5)));
    const ds::SpectralFilter flat(ds::uniform_weights(ph, pw));
    const auto direct = ds::spectral_score_direct(fields, radial.weights());
    const auto filtered = ds::spectral_score_filtered(fields, radial);
    const auto direct_flat = ds::spectral_score_direct(fields, flat.weights());
    const auto filtered_flat = ds::spectral_score_filtered(fields, flat);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); };
    for (std::size_t i = 0; i < scene.size(); ++i) {
      if (direct[i] > 0.0 || filtered[i] > 0.0) worst_filtered = std::max(worst_filtered, rel(filtered[i], direct[i]));
      const double spatial = fields.spatial_sq_grad[i];
      if (spatial > 0.0) {
        worst_parseval = std::max(worst_parseval, rel(direct_flat[i], spatial));
        worst_parseval = std::max(worst_parseval, rel(filtered_flat[i], spatial));
      } else if (direct_flat[i] != 0.0 || filtered_flat[i] != 0.0) {
        worst_parseval = 1.0;
      }
    }
    ++scenes;
  }
  return {worst_filtered <= 1e-6 && worst_parseval <= 1e-6,
          fmt("%d scenes, filtered vs direct max rel %.2e, w=1 vs spatial max rel %.2e", scenes, worst_filtered,
              worst_parseval)};
}

struct SchedulerRun {
  std::vector<int> evaluations;
  std::vector<std::pair<int, std::size_t>> prunes;
  std::vector<bool> forced;
  int activated_at = -1;
};

SchedulerRun drive(const ds::SchedulerConfig& c, std::size_t n0, int last_iter,
                   const std::function<double(int)>& l1_at) {
  ds::PruningScheduler s(c);
  SchedulerRun r;
  std::size_t n = n0;
  for (int it = 0; it <= last_iter; ++it) {
    ds::Action a = s.step(it, n);
    if (a.kind == ds::Action::Kind::EvaluateL1) {
      r.evaluations.push_back(it);
      a = s.step(it, n, l1_at(it));
    }
    if (a.kind == ds::Action::Kind::Prune) {
      n = a.target_count;
      r.prunes.emplace_back(it, n);
      r.forced.push_back(a.forced);
    }
    if (a.kind == ds::Action::Kind::ActivateDoG) r.activated_at = it;
    if (a.kind == ds::Action::Kind::Finish) break;
  }
  return r;
}

Outcome scheduler_conformance() {
  ds::SchedulerConfig c;
  c.prune_start_iter = 1000;
  c.total_iters = 1000000;
  c.prune_phase_max_iters = 1000000;
  c.n_target = 100;
  std::vector<std::string> errors;

  // evaluation cadence plus the beta gate and the Iter_max fallback
  struct Trace {
    const char* name;
    std::map<int, double> l1;
    int last_iter;
    std::vector<std::pair<int, std::size_t>> prunes;
    std::vector<bool> forced;
  };
  const std::vector<Trace> traces = {
      {"improved", {{1000, 0.100}, {1500, 0.094}}, 1500, {{1500, 550}}, {false}},
      {"boundary", {{1000, 0.100}, {1500, 0.095}}, 1500, {{1500, 550}}, {false}},
      {"unmet", {{1000, 0.100}, {1500, 0.097}}, 1500, {}, {}},
      {"iter_max",
       {{1000, 0.100}, {1500, 0.099}, {2000, 0.099}, {2500, 0.099}, {3000, 0.099}},
       3000,
       {{3000, 550}},
       {true}},
      {"mixed",
       {{1000, 0.100}, {1500, 0.097}, {2000, 0.090}, {2500, 0.088}, {3000, 0.080}, {3500, 0.079}, {4000, 0.078},
        {4500, 0.077}, {5000, 0.0765}, {5500, 0.070}},
       5500,
       {{2000, 550}, {3000, 325}, {5000, 213}, {5500, 156}},
       {false, false, true, false}},
  };
  int evaluations_checked = 0;
  for (const Trace& t : traces) {
    const SchedulerRun r = drive(c, 1000, t.last_iter, [&](int it) { return t.l1.at(it); });
    std::vector<int> expected_evals;
    for (const auto& [it, v] : t.l1) expected_evals.push_back(it);
    evaluations_checked += static_cast<int>(r.evaluations.size());
    if (r.evaluations != expected_evals) errors.push_back(std::string(t.name) + ": evaluation iterations differ");
    if (r.prunes != t.prunes) errors.push_back(std::string(t.name) + ": prune events differ");
    if (r.forced != t.forced) errors.push_back(std::string(t.name) + ": forced flags differ");
  }

  // telescoping counts over ten rounds
  ds::SchedulerConfig tc = c;
  tc.min_prune_count = 0.0;
  double l1 = 1.0;
  const SchedulerRun tel = drive(tc, 1000, 1000 + 500 * 10, [&](int it) {
    if (it > 1000) l1 *= 0.9;
    return l1;
  });
  int exact = 0;
  std::string counts;
  for (int t = 1; t <= 10 && t <= static_cast<int>(tel.prunes.size()); ++t) {
    const double ideal = 1000.0 - 900.0 * (1.0 - std::ldexp(1.0, -t));
    const auto n = tel.prunes[t - 1].second;
    counts += (t > 1 ? "," : "") + std::to_string(n);
    if (n == static_cast<std::size_t>(std::llround(ideal))) ++exact;
  }
  if (exact != 10) errors.push_back("telescoping counts differ from N0 - (N0 - N_target)(1 - 2^-t)");

  return {errors.empty(),
          fmt("%zu scripted traces, %d evaluations, telescoping t=1..10 counts %s", traces.size(), evaluations_checked,
              counts.c_str()) +
              (errors.empty() ? "" : "; " + errors.front())};
}

// Shared synthetic setup for the training experiments.
ds::TrainConfig e2e_config(std::uint64_t seed, bool pruned) {
  ds::TrainConfig c;
  c.total_iters = 3000;
  c.prune_start_iter = 300;
  c.check_period = 50;
  c.iter_max = 200;
  c.prune_phase_max_iters = 2000;
  c.n_target = pruned ? 100 : -1;
  c.variant = pruned ? ds::Variant::Full : ds::Variant::V3;
  c.rates.position_decay_steps = c.total_iters;
  c.seed = seed;
  return c;
}

Outcome self_reconstruction() {
  const std::vector<std::uint64_t> seeds = {0, 1, 2};
  bool a_ok = true, b_ok = true, c_ok = true;
  std::string detail;
  double worst_secs = 0.0;
  for (std::uint64_t seed : seeds) {
    const auto t0 = std::chrono::steady_clock::now();
    ds::SyntheticOptions so;
    so.seed = seed;
    const ds::SyntheticScene syn = ds::make_synthetic_scene(so);
    const ds::SceneModel init = ds::jittered_init(syn.gt, 3, seed + 1000);

    const ds::TrainResult pruned = ds::train(e2e_config(seed, true), syn.train, init);
    ds::TrainConfig control_cfg = e2e_config(seed, false);
    control_cfg.n_target = static_cast<long long>(init.size());
    const ds::TrainResult control = ds::train(control_cfg, syn.train, init);
    const double p = ds::evaluate(pruned.scene, syn.held_out).psnr;
    const double q = ds::evaluate(control.scene, syn.held_out).psnr;

    // curve shape: count never rises during pruning; the activation dip is
    // back at or below the pre-activation L1 within 200 iterations
    bool monotone = true;
    std::size_t prev = init.size();
    double pre = -1, at = -1, recovered = -1;
    long long act_iter = -1;
    for (std::size_t i = 0; i < pruned.curve.size(); ++i) {
      const ds::CurveRow& row = pruned.curve[i];
      if (act_iter < 0) {
        if (row.n_primitives > prev) monotone = false;
        prev = row.n_primitives;
      }
      if (row.event == ds::CurveEvent::ActivateDoG) {
        act_iter = row.iter;
        at = row.l1;
        for (std::size_t k = i; k-- > 0;)
          if (pruned.curve[k].event == ds::CurveEvent::Eval) {
            pre = pruned.curve[k].l1;
            break;
          }
      } else if (act_iter >= 0 && recovered < 0 && row.event == ds::CurveEvent::Eval && row.iter <= act_iter + 200) {
        recovered = row.l1;
      }
    }
    const bool dip = at > pre && pre > 0;
    const bool rec = recovered >= 0 && recovered <= pre;
    const bool shape = monotone && act_iter >= 0 && dip && rec;
    const double secs = seconds_since(t0);
    worst_secs = std::max(worst_secs, secs);

    a_ok = a_ok && p >= 30.0;
    b_ok = b_ok && p >= q - 1.0;
    c_ok = c_ok && shape;
    detail += fmt(" [seed %llu: pruned %.2f dB (n=%zu), control %.2f dB, gap %.2f, dip %.5f->%.5f->%.5f, %.0fs]",
                  static_cast<unsigned long long>(seed), p, pruned.scene.size(), q, q - p, pre, at, recovered, secs);
  }
  const bool time_ok = worst_secs < 600.0;
  return {a_ok && b_ok && c_ok && time_ok,
          fmt("(a) >=30 dB %s, (b) within 1 dB of control %s, (c) curve pattern %s, runtime %s;", a_ok ? "ok" : "FAIL",
              b_ok ? "ok" : "FAIL", c_ok ? "ok" : "FAIL", time_ok ? "ok" : "FAIL") +
              detail};
}

Outcome score_quality() {
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ds::SyntheticOptions so;
    so.seed = seed;
    so.gaussians = 60;
    so.views = 6;
    so.resolution = 48;
    const ds::SyntheticScene syn = ds::make_synthetic_scene(so);
    const ds::SceneModel init = ds::jittered_init(syn.gt, 2, seed + 1000);
    double psnr[2] = {0, 0};
    int k = 0;
    for (ds::PruneRanking ranking : {ds::PruneRanking::Sps, ds::PruneRanking::Random}) {
      ds::TrainConfig c;
      c.variant = ds::Variant::V3;
      c.total_iters = 1200;
      c.prune_start_iter = 600;
      c.check_period = 50;
      c.iter_max = 100;
      c.prune_phase_max_iters = 1000;
      c.n_target = static_cast<long long>(init.size() / 2);
      c.min_prune_count = 1e9;  // a single 50% round
      c.rates.position_decay_steps = c.total_iters;
      c.prune_ranking = ranking;
      c.seed = seed;
      psnr[k++] = ds::evaluate(ds::train(c, syn.train, init).scene, syn.held_out).psnr;
    }
    wins += psnr[0] > psnr[1];
    detail += fmt(" [seed %llu: sps %.2f vs random %.2f]", static_cast<unsigned long long>(seed), psnr[0], psnr[1]);
  }
  return {wins >= 4, fmt("SPS beat random on %d/5 seeds;", wins) + detail};
}

Outcome dog_expressiveness() {
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ds::PlaneTarget target = ds::make_plane_target(seed, 6, 48);
    const ds::SceneModel init = ds::plane_init(seed, 50);
    double l1[2] = {0, 0};
    int k = 0;
    for (ds::Variant v : {ds::Variant::Full, ds::Variant::V3}) {
      ds::TrainConfig c;
      c.variant = v;
      c.total_iters = 3000;
      c.prune_start_iter = 300;
      c.check_period = 50;
      c.iter_max = 100;
      c.n_target = 50;
      c.rates.position_decay_steps = c.total_iters;
      c.seed = seed;
      l1[k++] = ds::full_train_l1(ds::train(c, target.train, init).scene, target.train);
    }
    wins += l1[0] < l1[1];
    detail += fmt(" [seed %llu: dog %.5f vs vanilla %.5f]", static_cast<unsigned long long>(seed), l1[0], l1[1]);
  }
  return {wins >= 4, fmt("50-primitive DoG model beat vanilla on %d/5 seeds;", wins) + detail};
}

Outcome serialization() {
  namespace fs = std::filesystem;
  std::vector<std::string> errors;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  auto f32 = [](double v) {
    volatile float narrowed = static_cast<float>(v);
    return static_cast<double>(narrowed);
  };

  const fs::path dir = fs::temp_directory_path() / ("dogsplat_acceptance_" + std::to_string(rng() % 1000000));
  fs::create_directories(dir);

  int ply_cases = 0;
  for (int deg = 0; deg <= ds::kMaxShDegree; ++deg) {
    ds::SceneModel scene(deg, deg == 1 ? 2.0 : 1.0);
    for (int i = 0; i < 25; ++i) {
      ds::GaussianParams g;
      g.sh_degree = deg;
      g.position = Vec3(f32(u(rng)), f32(u(rng)), f32(u(rng)));
      g.rotation = ds::Vec4(f32(u(rng)), f32(u(rng)), f32(u(rng)), f32(u(rng)));
      g.log_scales = Vec3(f32(u(rng) - 3), f32(u(rng) - 3), f32(u(rng) - 3));
      g.opacity_logit = f32(u(rng));
      for (int k = 0; k < ds::sh_coeff_count(deg); ++k) g.sh[k] = Vec3(f32(u(rng)), f32(u(rng)), f32(u(rng)));
      ds::DoGParams d;
      d.active = i % 2 == 0;
      d.scale_latent = Vec3(f32(u(rng)), f32(u(rng)), f32(u(rng)));
      d.alpha_latent = f32(u(rng));
      scene.push_back(g, d);
    }
    const std::string path = (dir / ("m" + std::to_string(deg) + ".ply")).string();
    ds::write_ply(scene, path);
    if (!(ds::read_ply(path) == scene)) errors.push_back("PLY round trip differs at degree " + std::to_string(deg));
    ++ply_cases;

    // strip the DoG properties: vanilla layout
    ds::SceneModel stripped = scene;
    for (std::size_t i = 0; i < stripped.size(); ++i) stripped.set_dog_active(i, false);
    std::ostringstream out;
    ds::write_ply(stripped, out);
    std::string bytes = out.str();
    const std::size_t end = bytes.find("end_header\n") + 11;
    std::string header = bytes.substr(0, end);
    for (const char* name : {"property float f_alpha\n", "property float f_sx\n", "property float f_sy\n",
                             "property float f_sz\n", "property uchar dog_active\n"})
      header.erase(header.find(name), std::string(name).size());
    const std::size_t old_stride = (bytes.size() - end) / scene.size();
    const std::size_t new_stride = old_stride - 17;
    std::string payload;
    for (std::size_t i = 0; i < scene.size(); ++i) payload += bytes.substr(end + i * old_stride, new_stride);
    const std::string vanilla = header + payload;
    const ds::SceneModel loaded = ds::read_ply(std::vector<char>(vanilla.begin(), vanilla.end()));
    if (loaded.dog_count() != 0 || loaded.size() != scene.size())
      errors.push_back("vanilla layout did not load with N_dog = 0");
    for (std::size_t i = 0; i < loaded.size(); ++i)
      if (loaded.gaussian(i).position != scene.gaussian(i).position ||
          loaded.gaussian(i).opacity_logit != scene.gaussian(i).opacity_logit)
        errors.push_back("vanilla layout values differ");
  }

  ds::ImageBuffer img = ds::ImageBuffer::filled(17, 9, Vec3::Zero());
  for (double& v : img.rgb) v = static_cast<double>(rng() % 256) / 255.0;
  const std::string png = (dir / "a.png").string();
  ds::write_png(png, img);
  const ds::ImageBuffer back = ds::read_png(png);
  ds::write_png((dir / "b.png").string(), back);
  if (back.rgb != img.rgb || ds::read_png((dir / "b.png").string()).rgb != img.rgb)
    errors.push_back("PNG pixel data differs");
  if (ds::quantize_channel(0.5) != 128) errors.push_back("0.5 does not quantize to 128");

  std::vector<ds::CurveRow> rows;
  for (int i = 0; i < 50; ++i)
    rows.push_back({i, 1000u - static_cast<std::size_t>(i), static_cast<std::size_t>(i % 3), u(rng) * 0.1,
                    20 + u(rng), static_cast<ds::CurveEvent>(i % 6)});
  const std::string csv = (dir / "c.csv").string();
  ds::write_curve(csv, rows);
  if (ds::read_curve(csv) != rows) errors.push_back("CSV round trip differs");

  ds::TrainConfig cfg;
  cfg.beta = 0.9 + u(rng) * 0.01;
  cfg.rates.position_init = 1.6e-4 * (1 + u(rng) * 0.1);
  cfg.n_target = 123;
  cfg.variant = ds::Variant::V2;
  cfg.prune_ranking = ds::PruneRanking::Random;
  const ds::TrainConfig cfg_back = ds::parse_config(ds::format_config(cfg));
  if (ds::format_config(cfg_back) != ds::format_config(cfg) || cfg_back.beta != cfg.beta ||
      cfg_back.rates.position_init != cfg.rates.position_init)
    errors.push_back("config round trip differs");

  fs::remove_all(dir);
  return {errors.empty(), fmt("%d PLY degrees + vanilla layout, PNG, CSV (%zu rows), config", ply_cases, rows.size()) +
                              (errors.empty() ? "" : "; " + errors.front())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, gradient_parity},   {2, rasterizer_equivalence}, {3, dog_degeneration},
      {4, spectral_equivalence}, {5, scheduler_conformance}, {6, self_reconstruction},
      {7, score_quality},     {8, dog_expressiveness},     {9, serialization},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s - %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
