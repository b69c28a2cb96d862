#include "dogsplat/synthetic.hpp"

#include "dogsplat/errors.hpp"
#include "dogsplat/sh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace dogsplat {

namespace {

double f32(double v) {
  volatile float narrowed = static_cast<float>(v);
  return narrowed;
}

Vec3 f32(const Vec3& v) { return Vec3(f32(v.x()), f32(v.y()), f32(v.z())); }

Vec4 random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec4 q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  if (q[0] < 0.0) q = -q;
  return Vec4(f32(q[0]), f32(q[1]), f32(q[2]), f32(q[3]));
}

Dataset render_views(const SceneModel& scene, const std::vector<Camera>& cameras, const char* prefix) {
  Dataset d;
  d.cameras = cameras;
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    ImageBuffer img = render_tiled(scene, cameras[i]);
    img.transmittance.clear();
    img.contributors.clear();
    d.images.push_back(std::move(img));
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03zu.png", prefix, i);
    d.names.emplace_back(name);
  }
  return d;
}

}  // namespace

std::vector<Camera> ring_cameras(int views, int resolution, double radius, double height, double focal_scale,
                                 double offset) {
  std::vector<Camera> out;
  for (int k = 0; k < views; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + offset) / views;
    const Vec3 eye(radius * std::cos(theta), height, radius * std::sin(theta));
    out.push_back(Camera::look_at(eye, Vec3::Zero(), Vec3::UnitY(), focal_scale * resolution, resolution,
                                  resolution));
  }
  return out;
}

SyntheticScene make_synthetic_scene(const SyntheticOptions& o) {
  if (o.gaussians < 1) throw RangeError("gaussians must be at least 1");
  if (o.views < 2) throw RangeError("views must be at least 2");
  if (o.resolution < 1) throw RangeError("resolution must be positive");

  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> pos(-0.5, 0.5);
  std::uniform_real_distribution<double> scale(0.02, 0.15);
  std::uniform_real_distribution<double> opacity(0.4, 0.95);
  std::uniform_real_distribution<double> color(0.05, 0.95);

  SyntheticScene out;
  for (int i = 0; i < o.gaussians; ++i) {
    GaussianParams g;
    g.position = f32(Vec3(pos(rng), pos(rng), pos(rng)));
    g.rotation = random_quaternion(rng);
    g.log_scales = f32(Vec3(std::log(scale(rng)), std::log(scale(rng)), std::log(scale(rng))));
    g.opacity_logit = f32(logit(opacity(rng)));
    g.sh[0] = f32(rgb_to_sh_dc(Vec3(color(rng), color(rng), color(rng))));
    out.gt.push_back(g);
  }
  out.train = render_views(
      out.gt, ring_cameras(o.views, o.resolution, o.ring_radius, o.ring_height, o.focal_scale), "view");
  out.held_out = render_views(
      out.gt, ring_cameras(o.views, o.resolution, o.ring_radius, o.ring_height, o.focal_scale, 0.5), "test");
  return out;
}

PlaneTarget make_plane_target(std::uint64_t seed, int views, int resolution) {
  if (views < 2) throw RangeError("views must be at least 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> shift(-0.2, 0.2);
  std::uniform_real_distribution<double> dark(0.05, 0.3);
  std::uniform_real_distribution<double> light(0.7, 0.95);

  PlaneTarget t;
  const double a = angle(rng);
  const Vec2 normal(std::cos(a), std::sin(a));
  const double offset = shift(rng);
  t.color_a = Vec3(dark(rng), dark(rng), dark(rng));
  t.color_b = Vec3(light(rng), light(rng), light(rng));

  auto cone = [&](double phase) {
    std::vector<Camera> cams;
    for (int k = 0; k < views; ++k) {
      const double theta = 2.0 * std::numbers::pi * (k + phase) / views;
      const Vec3 eye(0.6 * std::cos(theta), 0.6 * std::sin(theta), 2.5);
      cams.push_back(Camera::look_at(eye, Vec3::Zero(), Vec3::UnitY(), 1.2 * resolution, resolution, resolution));
    }
    return cams;
  };
  auto render = [&](const std::vector<Camera>& cams, const char* prefix) {
    Dataset d;
    d.cameras = cams;
    for (std::size_t i = 0; i < cams.size(); ++i) {
      const Camera& cam = cams[i];
      ImageBuffer img = ImageBuffer::filled(cam.width, cam.height, Vec3::Zero());
      const Vec3 origin = cam.center();
      for (int y = 0; y < cam.height; ++y) {
        for (int x = 0; x < cam.width; ++x) {
          const Vec3 dir_cam((x - cam.cx) / cam.fx, (y - cam.cy) / cam.fy, 1.0);
          const Vec3 dir = cam.rotation.transpose() * dir_cam;
          const double s = -origin.z() / dir.z();
          const Vec3 hit = origin + s * dir;
          const bool side = normal.x() * hit.x() + normal.y() * hit.y() > offset;
          const Vec3 c = side ? t.color_b : t.color_a;
          for (int ch = 0; ch < 3; ++ch) img.at(x, y, ch) = c[ch];
        }
      }
      d.images.push_back(std::move(img));
      char name[64];
      std::snprintf(name, sizeof name, "%s_%03zu.png", prefix, i);
      d.names.emplace_back(name);
    }
    return d;
  };
  t.train = render(cone(0.0), "view");
  t.held_out = render(cone(0.5), "test");
  return t;
}

SceneModel jittered_init(const SceneModel& gt, int copies, std::uint64_t seed, double position_jitter) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  SceneModel out(gt.sh_degree(), gt.scale_factor_max());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const GaussianParams base = gt.gaussian(i);
    for (int c = 0; c < copies; ++c) {
      GaussianParams g = base;
      g.position += position_jitter * Vec3(n(rng), n(rng), n(rng));
      g.log_scales += Vec3(0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng));
      g.opacity_logit = logit(0.1 + 0.2 * (u(rng) + 0.5));
      g.sh[0] += 0.5 * Vec3(u(rng), u(rng), u(rng));
      out.push_back(g);
    }
  }
  return out;
}

SceneModel random_init(std::uint64_t seed, int count, double extent, double scale, double opacity) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-extent, extent);
  std::uniform_real_distribution<double> color(0.2, 0.8);
  SceneModel out;
  for (int i = 0; i < count; ++i) {
    GaussianParams g;
    g.position = Vec3(pos(rng), pos(rng), pos(rng));
    g.log_scales = Vec3::Constant(std::log(scale));
    g.opacity_logit = logit(opacity);
    g.sh[0] = rgb_to_sh_dc(Vec3(color(rng), color(rng), color(rng)));
    out.push_back(g);
  }
  return out;
}

SceneModel plane_init(std::uint64_t seed, int count, double half_width) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-half_width, half_width);
  std::uniform_real_distribution<double> color(0.3, 0.7);
  const double spacing = 2.0 * half_width / std::sqrt(static_cast<double>(std::max(count, 1)));
  SceneModel out;
  for (int i = 0; i < count; ++i) {
    GaussianParams g;
    g.position = Vec3(pos(rng), pos(rng), 0.0);
    g.log_scales = Vec3(std::log(0.6 * spacing), std::log(0.6 * spacing), std::log(0.01));
    g.opacity_logit = logit(0.5);
    g.sh[0] = rgb_to_sh_dc(Vec3::Constant(color(rng)));
    out.push_back(g);
  }
  return out;
}

}  // namespace dogsplat
