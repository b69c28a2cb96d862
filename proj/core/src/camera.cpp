#include "dogsplat/camera.hpp"

#include <stdexcept>

namespace dogsplat {

void Camera::validate() const {
  if (width < 1 || height < 1) throw std::invalid_argument("camera dimensions must be >= 1");
  if (!(near > 0.0)) throw std::invalid_argument("camera near plane must be positive");
  const double orth = (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (orth > 1e-6 || rotation.determinant() < 0.0) throw std::invalid_argument("camera rotation is not a rotation");
}

Camera Camera::look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal, int width, int height) {
  const Vec3 forward = (target - eye).normalized();
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 down = forward.cross(right);
  Camera cam;
  cam.rotation.row(0) = right.transpose();
  cam.rotation.row(1) = down.transpose();
  cam.rotation.row(2) = forward.transpose();
  cam.translation = -cam.rotation * eye;
  cam.fx = focal;
  cam.fy = focal;
  cam.cx = 0.5 * (width - 1);
  cam.cy = 0.5 * (height - 1);
  cam.width = width;
  cam.height = height;
  return cam;
}

}  // namespace dogsplat
