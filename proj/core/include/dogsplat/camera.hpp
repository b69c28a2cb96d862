#pragma once

#include "dogsplat/math.hpp"

#include <string>

namespace dogsplat {

/// Pinhole camera. `rotation`/`translation` map world to camera space,
/// camera looks down +z with +y pointing down the image.
struct Camera {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;
  double near = 0.2;

  Vec3 to_camera(const Vec3& world) const { return rotation * world + translation; }
  Vec3 center() const { return -rotation.transpose() * translation; }

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;

  /// Camera at `eye` looking at `target`, image +y aligned with -`up`.
  static Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal, int width,
                        int height);
};

}  // namespace dogsplat
