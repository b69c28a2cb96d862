#include "dogsplat/rasterizer.hpp"

#include "dogsplat/errors.hpp"
#include "dogsplat/parallel.hpp"
#include "dogsplat/sh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace dogsplat {

ImageBuffer ImageBuffer::filled(int width, int height, const Vec3& value) {
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.rgb.resize(3 * img.pixel_count());
  for (std::size_t p = 0; p < img.pixel_count(); ++p)
    for (int c = 0; c < 3; ++c) img.rgb[3 * p + c] = value[c];
  return img;
}

EffectiveWeight effective_weight(const Splat2D& splat, double alpha, double alpha_p, const Vec2& x) {
  EffectiveWeight w;
  const double dx = x.x() - splat.mean2d.x();
  const double dy = x.y() - splat.mean2d.y();
  w.gauss = std::exp(-0.5 * splat.conic.quadratic(dx, dy));
  w.raw = alpha * w.gauss;
  if (splat.pseudo_conic) {
    w.pseudo = std::exp(-0.5 * splat.pseudo_conic->quadratic(dx, dy));
    w.raw -= alpha_p * w.pseudo;
  }
  w.beta = std::clamp(w.raw, -kWeightClamp, kWeightClamp);
  w.clamped = w.beta != w.raw;
  return w;
}

RenderFrame::RenderFrame(const SceneModel& scene, const Camera& camera, const RenderOptions& options)
    : camera_(camera), options_(options), scene_size_(scene.size()) {
  const Vec3 eye = camera.center();
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const GaussianParams g = scene.gaussian(i);
    const DoGParams d = scene.dog(i);
    auto splat = project(camera, g, d);
    if (!splat) continue;
    PreparedSplat p;
    p.index = i;
    p.splat = std::move(*splat);
    p.alpha = g.opacity();
    if (d.active) {
      p.alpha_factor = d.alpha_factor();
      p.alpha_p = p.alpha_factor * p.alpha;
    }
    p.view_dir = (g.position - eye).normalized();
    p.color = eval_color(g, p.view_dir);
    splats_.push_back(std::move(p));
  }
  std::stable_sort(splats_.begin(), splats_.end(), [](const PreparedSplat& a, const PreparedSplat& b) {
    if (a.splat.depth != b.splat.depth) return a.splat.depth < b.splat.depth;
    return a.index < b.index;
  });

  const int ts = std::max(1, options.tile_size);
  tiles_x_ = (camera.width + ts - 1) / ts;
  tiles_y_ = (camera.height + ts - 1) / ts;
  tile_lists_.resize(static_cast<std::size_t>(tiles_x_) * tiles_y_);
  for (std::size_t k = 0; k < splats_.size(); ++k) {
    const PixelRect& r = splats_[k].splat.rect;
    for (int ty = r.y0 / ts; ty <= r.y1 / ts; ++ty)
      for (int tx = r.x0 / ts; tx <= r.x1 / ts; ++tx)
        tile_lists_[static_cast<std::size_t>(ty) * tiles_x_ + tx].push_back(k);
  }
}

namespace {

struct PixelResult {
  Vec3 color = Vec3::Zero();
  double transmittance = 1.0;
  int contributors = 0;
};

/// Front-to-back blend of one pixel over `order` (positions into splats).
/// visit(position, weight, T_before) is called for every contribution.
template <typename Order, typename Visit>
PixelResult blend_pixel(const std::vector<PreparedSplat>& splats, const Order& order, int px, int py,
                        const Vec3& background, Visit&& visit) {
  PixelResult out;
  const Vec2 x(px, py);
  double T = 1.0;
  for (std::size_t pos : order) {
    const PreparedSplat& s = splats[pos];
    if (!s.splat.rect.contains(px, py)) continue;
    const EffectiveWeight w = effective_weight(s.splat, s.alpha, s.alpha_p, x);
    if (std::abs(w.beta) < kMinWeight) continue;
    visit(pos, w, T);
    out.color += s.color * (w.beta * T);
    T *= 1.0 - w.beta;
    ++out.contributors;
    if (T < kMinTransmittance) break;
  }
  out.color += background * T;
  out.transmittance = T;
  return out;
}

struct NoVisit {
  void operator()(std::size_t, const EffectiveWeight&, double) const {}
};

/// 0, 1, ..., n-1 without materializing it.
struct CountingRange {
  std::size_t n;
  struct It {
    std::size_t v;
    std::size_t operator*() const { return v; }
    It& operator++() {
      ++v;
      return *this;
    }
    bool operator!=(const It& o) const { return v != o.v; }
  };
  It begin() const { return {0}; }
  It end() const { return {n}; }
};

ImageBuffer blank_image(const Camera& cam) {
  ImageBuffer img;
  img.width = cam.width;
  img.height = cam.height;
  img.rgb.assign(3 * img.pixel_count(), 0.0);
  img.transmittance.assign(img.pixel_count(), 1.0);
  img.contributors.assign(img.pixel_count(), 0);
  return img;
}

void store(ImageBuffer& img, int px, int py, const PixelResult& r) {
  const std::size_t p = static_cast<std::size_t>(py) * img.width + px;
  for (int c = 0; c < 3; ++c) img.rgb[3 * p + c] = r.color[c];
  img.transmittance[p] = r.transmittance;
  img.contributors[p] = r.contributors;
}

template <typename PerPixel>
void for_each_tile_pixel(const RenderFrame& frame, std::size_t tile, PerPixel&& fn) {
  const int ts = std::max(1, frame.options().tile_size);
  const int tx = static_cast<int>(tile % frame.tiles_x());
  const int ty = static_cast<int>(tile / frame.tiles_x());
  const int x_end = std::min(frame.camera().width, (tx + 1) * ts);
  const int y_end = std::min(frame.camera().height, (ty + 1) * ts);
  for (int py = ty * ts; py < y_end; ++py)
    for (int px = tx * ts; px < x_end; ++px) fn(px, py);
}

/// Screen-space gradient accumulators of one splat.
struct SplatAccum {
  Vec2 mean = Vec2::Zero();
  double conic_a = 0.0, conic_b = 0.0, conic_c = 0.0;
  double pconic_a = 0.0, pconic_b = 0.0, pconic_c = 0.0;
  double alpha = 0.0;
  double alpha_factor = 0.0;
  Vec3 color = Vec3::Zero();
  double spatial = 0.0;

  void add(const SplatAccum& o) {
    mean += o.mean;
    conic_a += o.conic_a;
    conic_b += o.conic_b;
    conic_c += o.conic_c;
    pconic_a += o.pconic_a;
    pconic_b += o.pconic_b;
    pconic_c += o.pconic_c;
    alpha += o.alpha;
    alpha_factor += o.alpha_factor;
    color += o.color;
    spatial += o.spatial;
  }
};

struct Contribution {
  std::size_t pos;
  EffectiveWeight w;
  double T;
};

/// Walks one pixel front to back, then distributes the adjoint back to
/// front. emit(contribution, dI_dbeta) receives the per-channel dI/dbeta.
template <typename Order, typename Emit>
void reverse_pixel(const RenderFrame& frame, const Order& order, int px, int py,
                   std::vector<Contribution>& scratch, Emit&& emit) {
  const auto& splats = frame.splats();
  scratch.clear();
  blend_pixel(splats, order, px, py, frame.options().background,
              [&](std::size_t pos, const EffectiveWeight& w, double T) { scratch.push_back({pos, w, T}); });
  Vec3 behind = frame.options().background;
  for (auto it = scratch.rbegin(); it != scratch.rend(); ++it) {
    const PreparedSplat& s = splats[it->pos];
    const Vec3 dI_dbeta = it->T * (s.color - behind);
    emit(*it, dI_dbeta);
    behind = s.color * it->w.beta + behind * (1.0 - it->w.beta);
  }
}

double alpha_sensitivity(const PreparedSplat& s, const EffectiveWeight& w) {
  if (w.clamped) return 0.0;
  return w.gauss - s.alpha_factor * w.pseudo;
}

}  // namespace

ImageBuffer render_naive(const SceneModel& scene, const Camera& camera, const RenderOptions& options) {
  const RenderFrame frame(scene, camera, options);
  ImageBuffer img = blank_image(camera);
  const CountingRange all{frame.splats().size()};
  for (int py = 0; py < camera.height; ++py)
    for (int px = 0; px < camera.width; ++px)
      store(img, px, py, blend_pixel(frame.splats(), all, px, py, options.background, NoVisit{}));
  return img;
}

ImageBuffer render_tiled(const RenderFrame& frame) {
  ImageBuffer img = blank_image(frame.camera());
  parallel_for(frame.tile_count(), frame.options().threads, [&](std::size_t tile) {
    const auto& list = frame.tile_list(tile);
    for_each_tile_pixel(frame, tile, [&](int px, int py) {
      store(img, px, py, blend_pixel(frame.splats(), list, px, py, frame.options().background, NoVisit{}));
    });
  });
  return img;
}

ImageBuffer render_tiled(const SceneModel& scene, const Camera& camera, const RenderOptions& options) {
  return render_tiled(RenderFrame(scene, camera, options));
}

GradientBundle backward(const SceneModel& scene, const Camera& camera, const ImageBuffer& dL_dI,
                        const RenderOptions& options) {
  return backward(scene, RenderFrame(scene, camera, options), dL_dI);
}

GradientBundle backward(const SceneModel& scene, const RenderFrame& frame, const ImageBuffer& dL_dI) {
  const Camera& cam = frame.camera();
  if (dL_dI.width != cam.width || dL_dI.height != cam.height)
    throw DimensionMismatch("image adjoint does not match the camera");

  const auto& splats = frame.splats();

  // Per-tile partial sums indexed like the tile list; merged in tile order
  // so the result does not depend on the thread count.
  std::vector<std::vector<SplatAccum>> partial(frame.tile_count());
  parallel_for(frame.tile_count(), frame.options().threads, [&](std::size_t tile) {
    const auto& list = frame.tile_list(tile);
    auto& acc = partial[tile];
    acc.assign(list.size(), SplatAccum{});
    std::vector<std::size_t> slot_of;  // splat position -> slot in `acc`
    if (!list.empty()) {
      slot_of.assign(list.back() + 1, 0);
      for (std::size_t j = 0; j < list.size(); ++j) slot_of[list[j]] = j;
    }
    std::vector<Contribution> scratch;
    for_each_tile_pixel(frame, tile, [&](int px, int py) {
      const std::size_t p = static_cast<std::size_t>(py) * cam.width + px;
      const Vec3 dL_dC(dL_dI.rgb[3 * p], dL_dI.rgb[3 * p + 1], dL_dI.rgb[3 * p + 2]);
      reverse_pixel(frame, list, px, py, scratch, [&](const Contribution& c, const Vec3& dI_dbeta) {
        const PreparedSplat& s = splats[c.pos];
        SplatAccum& a = acc[slot_of[c.pos]];
        a.color += dL_dC * (c.w.beta * c.T);
        const double sens = alpha_sensitivity(s, c.w);
        a.spatial += (dI_dbeta * sens).squaredNorm();
        if (c.w.clamped) return;
        const double dL_dbeta = dL_dC.dot(dI_dbeta);
        a.alpha += dL_dbeta * sens;
        a.alpha_factor += dL_dbeta * (-s.alpha * c.w.pseudo);
        const double dx = px - s.splat.mean2d.x();
        const double dy = py - s.splat.mean2d.y();
        // primary lobe: dL/dq = dL/dG * (-G/2)
        const double dq = dL_dbeta * s.alpha * (-0.5 * c.w.gauss);
        a.conic_a += dq * dx * dx;
        a.conic_b += dq * dx * dy;
        a.conic_c += dq * dy * dy;
        const Conic& k = s.splat.conic;
        a.mean += -2.0 * dq * Vec2(k.a * dx + k.b * dy, k.b * dx + k.c * dy);
        if (s.splat.pseudo_conic) {
          const double dqp = dL_dbeta * (-s.alpha_p) * (-0.5 * c.w.pseudo);
          a.pconic_a += dqp * dx * dx;
          a.pconic_b += dqp * dx * dy;
          a.pconic_c += dqp * dy * dy;
          const Conic& kp = *s.splat.pseudo_conic;
          a.mean += -2.0 * dqp * Vec2(kp.a * dx + kp.b * dy, kp.b * dx + kp.c * dy);
        }
      });
    });
  });

  std::vector<SplatAccum> total(splats.size());
  for (std::size_t tile = 0; tile < frame.tile_count(); ++tile) {
    const auto& list = frame.tile_list(tile);
    for (std::size_t j = 0; j < list.size(); ++j) total[list[j]].add(partial[tile][j]);
  }

  GradientBundle out;
  out.sh_degree = scene.sh_degree();
  out.params = ParamArrays::zeros(scene.size(), scene.sh_degree());
  out.spatial_sq_grad.assign(scene.size(), 0.0);
  auto& gp = out.params;
  const std::size_t rest_stride = group_stride(ParamGroup::ShRest, scene.sh_degree());

  for (std::size_t k = 0; k < splats.size(); ++k) {
    const PreparedSplat& s = splats[k];
    const SplatAccum& a = total[k];
    const std::size_t i = s.index;
    const GaussianParams g = scene.gaussian(i);
    const DoGParams d = scene.dog(i);

    out.spatial_sq_grad[i] = a.spatial;

    SplatGradient up;
    up.mean2d = a.mean;
    up.conic << a.conic_a, a.conic_b, a.conic_b, a.conic_c;
    up.pseudo_conic << a.pconic_a, a.pconic_b, a.pconic_b, a.pconic_c;
    ProjectionGradient pg = project_backward(cam, g, d, s.splat, up);

    // colour: SH coefficients and, for degree >= 1, the view direction
    const auto basis = sh_basis(g.sh_degree, s.view_dir);
    for (int c = 0; c < 3; ++c) gp.sh_dc[3 * i + c] += basis[0] * a.color[c];
    if (g.sh_degree > 0) {
      const auto dbasis = sh_basis_grad(g.sh_degree, s.view_dir);
      Vec3 ddir = Vec3::Zero();
      for (int kk = 1; kk < sh_coeff_count(g.sh_degree); ++kk) {
        const std::size_t base = i * rest_stride + 3 * static_cast<std::size_t>(kk - 1);
        for (int c = 0; c < 3; ++c) gp.sh_rest[base + c] += basis[kk] * a.color[c];
        ddir += dbasis[kk] * g.sh[kk].dot(a.color);
      }
      const Vec3 v = g.position - cam.center();
      const double n = v.norm();
      pg.position += (ddir - s.view_dir * s.view_dir.dot(ddir)) / n;
    }

    for (int c = 0; c < 3; ++c) {
      gp.position[3 * i + c] += pg.position[c];
      gp.log_scale[3 * i + c] += pg.log_scales[c];
    }
    for (int c = 0; c < 4; ++c) gp.rotation[4 * i + c] += pg.rotation[c];
    // a.alpha already includes the alpha dependence of alpha_p = f_alpha * alpha
    gp.opacity_logit[i] += a.alpha * logistic_grad(s.alpha);

    if (d.active) {
      gp.dog_alpha[i] += a.alpha_factor * logistic_grad(s.alpha_factor);
      const Vec3 f = d.scale_factors();
      for (int c = 0; c < 3; ++c) {
        const double unit = f[c] / d.scale_max;
        gp.dog_scale[3 * i + c] += pg.scale_factors[c] * d.scale_max * logistic_grad(unit);
      }
    }
  }
  return out;
}

OpacityGradientFields opacity_gradient_fields(const SceneModel& scene, const Camera& camera,
                                              const RenderOptions& options) {
  return opacity_gradient_fields(scene, RenderFrame(scene, camera, options));
}

OpacityGradientFields opacity_gradient_fields(const SceneModel& scene, const RenderFrame& frame) {
  const Camera& cam = frame.camera();
  const auto& splats = frame.splats();
  using Entry = OpacityGradientFields::Entry;

  struct TileOut {
    std::vector<std::pair<std::size_t, Entry>> entries;
    std::vector<double> spatial;  // indexed like the tile list
  };
  std::vector<TileOut> partial(frame.tile_count());
  parallel_for(frame.tile_count(), frame.options().threads, [&](std::size_t tile) {
    const auto& list = frame.tile_list(tile);
    TileOut& out = partial[tile];
    out.spatial.assign(list.size(), 0.0);
    std::vector<std::size_t> slot_of;
    if (!list.empty()) {
      slot_of.assign(list.back() + 1, 0);
      for (std::size_t j = 0; j < list.size(); ++j) slot_of[list[j]] = j;
    }
    std::vector<Contribution> scratch;
    for_each_tile_pixel(frame, tile, [&](int px, int py) {
      const std::size_t p = static_cast<std::size_t>(py) * cam.width + px;
      reverse_pixel(frame, list, px, py, scratch, [&](const Contribution& c, const Vec3& dI_dbeta) {
        const PreparedSplat& s = splats[c.pos];
        const double sens = alpha_sensitivity(s, c.w);
        out.spatial[slot_of[c.pos]] += (dI_dbeta * sens).squaredNorm();
        if (sens == 0.0) return;
        out.entries.push_back({s.index, Entry{p, dI_dbeta * sens}});
      });
    });
  });

  OpacityGradientFields out;
  out.width = cam.width;
  out.height = cam.height;
  out.per_primitive.resize(scene.size());
  out.spatial_sq_grad.assign(scene.size(), 0.0);
  std::vector<double> total(splats.size(), 0.0);
  for (std::size_t tile = 0; tile < partial.size(); ++tile) {
    const auto& list = frame.tile_list(tile);
    for (std::size_t j = 0; j < list.size(); ++j) total[list[j]] += partial[tile].spatial[j];
    for (auto& [index, entry] : partial[tile].entries) out.per_primitive[index].push_back(entry);
  }
  for (std::size_t k = 0; k < splats.size(); ++k) out.spatial_sq_grad[splats[k].index] = total[k];
  return out;
}

std::vector<std::vector<PixelContribution>> contribution_trace(const SceneModel& scene, const Camera& camera,
                                                               const RenderOptions& options) {
  const RenderFrame frame(scene, camera, options);
  std::vector<std::vector<PixelContribution>> trace(static_cast<std::size_t>(camera.width) * camera.height);
  const CountingRange all{frame.splats().size()};
  for (int py = 0; py < camera.height; ++py)
    for (int px = 0; px < camera.width; ++px) {
      auto& list = trace[static_cast<std::size_t>(py) * camera.width + px];
      blend_pixel(frame.splats(), all, px, py, options.background,
                  [&](std::size_t pos, const EffectiveWeight& w, double) {
                    list.push_back({frame.splats()[pos].index, w.clamped});
                  });
    }
  return trace;
}

}  // namespace dogsplat
