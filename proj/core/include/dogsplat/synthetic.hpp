#pragma once

#include "dogsplat/dataset.hpp"
#include "dogsplat/scene.hpp"

#include <cstdint>

namespace dogsplat {

struct SyntheticOptions {
  std::uint64_t seed = 0;
  int gaussians = 100;
  int views = 8;
  int resolution = 64;
  double ring_radius = 2.5;
  double ring_height = 0.9;
  /// Focal length as a multiple of the resolution.
  double focal_scale = 1.2;
};

struct SyntheticScene {
  SceneModel gt;
  Dataset train;     // ring views
  Dataset held_out;  // same ring, offset by half the angular step
};

/// Samples gaussians Gaussians in [-0.5, 0.5]^3 (scales 0.02..0.15,
/// opacities 0.4..0.95, degree-0 colours) and renders them from a ring of
/// cameras looking at the origin. Parameters are float-representable so a
/// PLY round trip is exact. Throws RangeError for gaussians < 1 or
/// views < 2.
SyntheticScene make_synthetic_scene(const SyntheticOptions& options);

/// Ring cameras. offset is in units of the angular step.
std::vector<Camera> ring_cameras(int views, int resolution, double radius, double height, double focal_scale,
                                 double offset = 0.0);

/// Plane z = 0 split by a straight edge into two flat colours, viewed from
/// a cone of cameras on the +z side. Images are point-sampled at pixel
/// centres, so the edge is hard.
struct PlaneTarget {
  Dataset train;
  Dataset held_out;
  Vec3 color_a = Vec3::Zero();
  Vec3 color_b = Vec3::Zero();
};
PlaneTarget make_plane_target(std::uint64_t seed, int views, int resolution);

/// Over-complete starting point: `copies` perturbed copies of every gt
/// primitive, at lower opacity.
SceneModel jittered_init(const SceneModel& gt, int copies, std::uint64_t seed, double position_jitter = 0.03);

/// `count` isotropic primitives uniformly inside [-extent, extent]^3.
SceneModel random_init(std::uint64_t seed, int count, double extent = 0.5, double scale = 0.05,
                       double opacity = 0.1);

/// `count` flat primitives scattered on the plane z = 0 within the given
/// half-width.
SceneModel plane_init(std::uint64_t seed, int count, double half_width = 1.0);

}  // namespace dogsplat
