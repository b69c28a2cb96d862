#include "dogsplat/errors.hpp"
#include "dogsplat/image_metrics.hpp"
#include "dogsplat/io/config.hpp"
#include "dogsplat/io/curve.hpp"
#include "dogsplat/io/dataset.hpp"
#include "dogsplat/io/ply.hpp"
#include "dogsplat/io/png.hpp"
#include "dogsplat/synthetic.hpp"
#include "dogsplat/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace dogsplat;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2, kInternalError = 3 };

bool verbose() {
  const char* v = std::getenv("DOGSPLAT_VERBOSE");
  return v && *v && std::string(v) != "0";
}

nlohmann::json to_json(const MetricsReport& m) {
  return {{"psnr", m.psnr},         {"ssim", m.ssim},   {"l1", m.l1},
          {"n_primitives", m.n_primitives}, {"n_dog", m.n_dog}, {"wall_seconds", m.wall_seconds}};
}

struct SynthArgs {
  std::uint64_t seed = 0;
  int gaussians = 100;
  int views = 8;
  int res = 64;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  SyntheticOptions o;
  o.seed = a.seed;
  o.gaussians = a.gaussians;
  o.views = a.views;
  o.resolution = a.res;
  const SyntheticScene s = make_synthetic_scene(o);
  save_dataset(a.out, s.train);
  write_ply(s.gt, (fs::path(a.out) / "gt.ply").string());
  return kOk;
}

struct TrainArgs {
  std::string config;
  std::string data;
  std::string out;
  std::string variant;
  std::string init;
  int threads = 0;
};

int run_train(const TrainArgs& a) {
  TrainConfig config = a.config.empty() ? TrainConfig{} : load_config(a.config);
  if (!a.variant.empty()) config.variant = parse_variant(a.variant);
  config.threads = a.threads;
  config.validate();
  const Dataset data = load_dataset(a.data);
  SceneModel init = a.init.empty() ? initial_scene(config) : read_ply(a.init);

  fs::create_directories(a.out);
  const fs::path out(a.out);
  const std::string curve_path = (out / "curve.csv").string();
  fs::remove(curve_path);
  CurveWriter writer(curve_path);
  const bool loud = verbose();
  const TrainResult r = train(config, data, std::move(init), [&](const CurveRow& row) {
    writer.append(row);
    if (loud && row.event != CurveEvent::None) std::cerr << format_curve_row(row) << '\n';
  });
  write_ply(r.scene, (out / "model.ply").string());
  MetricsReport m = evaluate(r.scene, data, render_options(config));
  m.wall_seconds = r.wall_seconds;
  std::ofstream(out / "metrics.json") << to_json(m).dump(2) << '\n';
  std::cout << to_json(m).dump(2) << '\n';
  return kOk;
}

struct RenderArgs {
  std::string model;
  std::string cameras;
  std::string out;
  std::string rasterizer = "tiled";
  int threads = 0;
};

int run_render(const RenderArgs& a) {
  const SceneModel scene = read_ply(a.model);
  const auto cams = read_cameras(a.cameras);
  fs::create_directories(a.out);
  RenderOptions opts;
  opts.threads = a.threads;
  for (const auto& nc : cams) {
    const ImageBuffer img =
        a.rasterizer == "naive" ? render_naive(scene, nc.camera, opts) : render_tiled(scene, nc.camera, opts);
    write_png((fs::path(a.out) / nc.name).string(), img);
  }
  return kOk;
}

int run_eval(const std::string& model, const std::string& data, int threads) {
  const SceneModel scene = read_ply(model);
  const Dataset d = load_dataset(data);
  RenderOptions opts;
  opts.threads = threads;
  std::cout << to_json(evaluate(scene, d, opts)).dump(2) << '\n';
  return kOk;
}

int run_curves(const std::string& log, const std::string& out) {
  const auto rows = read_curve(log);
  const std::string svg = curve_svg(rows);
  std::ofstream f(out, std::ios::trunc);
  if (!f) throw IoError("cannot open " + out);
  f << svg;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dogsplat: Gaussian splatting with scheduled pruning and DoG primitives"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Render a random Gaussian scene from a ring of cameras");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--gaussians", synth.gaussians, "Number of ground-truth Gaussians");
  synth_cmd->add_option("--views", synth.views, "Number of ring views");
  synth_cmd->add_option("--res", synth.res, "Image width and height");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Fit a model to a dataset directory");
  train_cmd->add_option("--config", tr.config, "Config file (key = value)")->check(CLI::ExistingFile);
  train_cmd->add_option("--data", tr.data, "Dataset directory with cameras.txt")->required();
  train_cmd->add_option("--out", tr.out, "Output directory")->required();
  train_cmd->add_option("--variant", tr.variant, "Overrides the config variant")
      ->check(CLI::IsMember({"v1", "v2", "v3", "full"}));
  train_cmd->add_option("--init", tr.init, "Starting model (PLY) instead of the random init");

  RenderArgs rr;
  auto* render_cmd = app.add_subcommand("render", "Render a model from every camera in a camera file");
  render_cmd->add_option("--model", rr.model, "Model PLY")->required();
  render_cmd->add_option("--cameras", rr.cameras, "Camera file")->required();
  render_cmd->add_option("--out", rr.out, "Output directory")->required();
  render_cmd->add_option("--rasterizer", rr.rasterizer, "naive or tiled")
      ->check(CLI::IsMember({"naive", "tiled"}));

  std::string eval_model, eval_data;
  auto* eval_cmd = app.add_subcommand("eval", "Print PSNR/SSIM/L1 of a model against a dataset");
  eval_cmd->add_option("--model", eval_model, "Model PLY")->required();
  eval_cmd->add_option("--data", eval_data, "Dataset directory")->required();

  std::string curve_log, curve_out;
  auto* curves_cmd = app.add_subcommand("curves", "Plot primitive count and PSNR from a curve log");
  curves_cmd->add_option("--log", curve_log, "Curve CSV")->required();
  curves_cmd->add_option("--out", curve_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*train_cmd) {
      tr.threads = threads;
      return run_train(tr);
    }
    if (*render_cmd) {
      rr.threads = threads;
      return run_render(rr);
    }
    if (*eval_cmd) return run_eval(eval_model, eval_data, threads);
    if (*curves_cmd) return run_curves(curve_log, curve_out);
  } catch (const ProtocolViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const Error& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "IoError: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsage;
}
