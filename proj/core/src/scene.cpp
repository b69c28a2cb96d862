#include "dogsplat/scene.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

namespace dogsplat {

const char* param_group_name(ParamGroup group) {
  switch (group) {
    case ParamGroup::Position: return "position";
    case ParamGroup::Rotation: return "rotation";
    case ParamGroup::LogScale: return "log_scale";
    case ParamGroup::OpacityLogit: return "opacity_logit";
    case ParamGroup::ShDc: return "sh_dc";
    case ParamGroup::ShRest: return "sh_rest";
    case ParamGroup::DogScaleLatent: return "dog_scale_latent";
    case ParamGroup::DogAlphaLatent: return "dog_alpha_latent";
  }
  return "unknown";
}

std::size_t group_stride(ParamGroup group, int sh_degree) {
  switch (group) {
    case ParamGroup::Position: return 3;
    case ParamGroup::Rotation: return 4;
    case ParamGroup::LogScale: return 3;
    case ParamGroup::OpacityLogit: return 1;
    case ParamGroup::ShDc: return 3;
    case ParamGroup::ShRest: return 3 * static_cast<std::size_t>(sh_coeff_count(sh_degree) - 1);
    case ParamGroup::DogScaleLatent: return 3;
    case ParamGroup::DogAlphaLatent: return 1;
  }
  return 0;
}

ParamArrays ParamArrays::zeros(std::size_t count, int sh_degree) {
  ParamArrays p;
  for (ParamGroup g : kAllParamGroups) p.group(g).assign(count * group_stride(g, sh_degree), 0.0);
  return p;
}

std::vector<double>& ParamArrays::group(ParamGroup g) {
  return const_cast<std::vector<double>&>(std::as_const(*this).group(g));
}

const std::vector<double>& ParamArrays::group(ParamGroup g) const {
  switch (g) {
    case ParamGroup::Position: return position;
    case ParamGroup::Rotation: return rotation;
    case ParamGroup::LogScale: return log_scale;
    case ParamGroup::OpacityLogit: return opacity_logit;
    case ParamGroup::ShDc: return sh_dc;
    case ParamGroup::ShRest: return sh_rest;
    case ParamGroup::DogScaleLatent: return dog_scale;
    case ParamGroup::DogAlphaLatent: return dog_alpha;
  }
  throw std::logic_error("invalid parameter group");
}

void ParamArrays::compact(std::span<const std::size_t> keep, int sh_degree) {
  for (ParamGroup g : kAllParamGroups) {
    auto& data = group(g);
    const std::size_t stride = group_stride(g, sh_degree);
    std::size_t dst = 0;
    for (std::size_t src : keep) {
      assert(src >= dst);
      std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(src * stride), stride,
                  data.begin() + static_cast<std::ptrdiff_t>(dst * stride));
      ++dst;
    }
    data.resize(keep.size() * stride);
  }
}

void ParamArrays::set_zero() {
  for (ParamGroup g : kAllParamGroups) std::fill(group(g).begin(), group(g).end(), 0.0);
}

SceneModel::SceneModel(int sh_degree, double scale_factor_max)
    : sh_degree_(sh_degree), scale_factor_max_(scale_factor_max), params_(ParamArrays::zeros(0, sh_degree)) {
  if (sh_degree < 0 || sh_degree > kMaxShDegree) throw std::invalid_argument("unsupported SH degree");
  if (!(scale_factor_max > 0.0)) throw std::invalid_argument("scale factor bound must be positive");
}

std::size_t SceneModel::dog_count() const {
  return static_cast<std::size_t>(std::count(dog_active_.begin(), dog_active_.end(), std::uint8_t{1}));
}

GaussianParams SceneModel::gaussian(std::size_t i) const {
  GaussianParams g;
  const auto& p = params_;
  g.position = Vec3(p.position[3 * i], p.position[3 * i + 1], p.position[3 * i + 2]);
  g.rotation = Vec4(p.rotation[4 * i], p.rotation[4 * i + 1], p.rotation[4 * i + 2], p.rotation[4 * i + 3]);
  g.log_scales = Vec3(p.log_scale[3 * i], p.log_scale[3 * i + 1], p.log_scale[3 * i + 2]);
  g.opacity_logit = p.opacity_logit[i];
  g.sh_degree = sh_degree_;
  g.sh[0] = Vec3(p.sh_dc[3 * i], p.sh_dc[3 * i + 1], p.sh_dc[3 * i + 2]);
  const std::size_t rest = group_stride(ParamGroup::ShRest, sh_degree_);
  for (int k = 1; k < sh_coeff_count(sh_degree_); ++k) {
    const std::size_t base = i * rest + 3 * static_cast<std::size_t>(k - 1);
    g.sh[k] = Vec3(p.sh_rest[base], p.sh_rest[base + 1], p.sh_rest[base + 2]);
  }
  return g;
}

DoGParams SceneModel::dog(std::size_t i) const {
  DoGParams d;
  const auto& p = params_;
  d.scale_latent = Vec3(p.dog_scale[3 * i], p.dog_scale[3 * i + 1], p.dog_scale[3 * i + 2]);
  d.alpha_latent = p.dog_alpha[i];
  d.active = dog_active_[i] != 0;
  d.scale_max = scale_factor_max_;
  return d;
}

void SceneModel::set_gaussian(std::size_t i, const GaussianParams& g) {
  auto& p = params_;
  for (int c = 0; c < 3; ++c) {
    p.position[3 * i + c] = g.position[c];
    p.log_scale[3 * i + c] = g.log_scales[c];
    p.sh_dc[3 * i + c] = g.sh[0][c];
  }
  for (int c = 0; c < 4; ++c) p.rotation[4 * i + c] = g.rotation[c];
  p.opacity_logit[i] = g.opacity_logit;
  const std::size_t rest = group_stride(ParamGroup::ShRest, sh_degree_);
  for (int k = 1; k < sh_coeff_count(sh_degree_); ++k) {
    const std::size_t base = i * rest + 3 * static_cast<std::size_t>(k - 1);
    for (int c = 0; c < 3; ++c) p.sh_rest[base + c] = g.sh[k][c];
  }
}

void SceneModel::set_dog(std::size_t i, const DoGParams& d) {
  for (int c = 0; c < 3; ++c) params_.dog_scale[3 * i + c] = d.scale_latent[c];
  params_.dog_alpha[i] = d.alpha_latent;
  dog_active_[i] = d.active ? 1 : 0;
}

std::size_t SceneModel::push_back(const GaussianParams& g, const DoGParams& d) {
  const std::size_t i = size();
  for (ParamGroup grp : kAllParamGroups) params_.group(grp).resize((i + 1) * group_stride(grp, sh_degree_), 0.0);
  dog_active_.push_back(0);
  set_gaussian(i, g);
  set_dog(i, d);
  return i;
}

void SceneModel::compact(std::span<const std::size_t> keep) {
  params_.compact(keep, sh_degree_);
  std::size_t dst = 0;
  for (std::size_t src : keep) dog_active_[dst++] = dog_active_[src];
  dog_active_.resize(keep.size());
}

void SceneModel::normalize_rotations() {
  for (std::size_t i = 0; i < size(); ++i) {
    Eigen::Map<Vec4> q(params_.rotation.data() + 4 * i);
    q.normalize();
  }
}

Mat3 rotation_matrix(const Vec4& q_raw) {
  const Vec4 q = q_raw.normalized();
  const double r = q[0], x = q[1], y = q[2], z = q[3];
  Mat3 R;
  R << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - r * z), 2.0 * (x * z + r * y),
      2.0 * (x * y + r * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - r * x),
      2.0 * (x * z - r * y), 2.0 * (y * z + r * x), 1.0 - 2.0 * (x * x + y * y);
  return R;
}

namespace {

Mat3 covariance_from(const Mat3& R, const Vec3& scales) {
  const Mat3 T = R * scales.asDiagonal();
  return T * T.transpose();
}

}  // namespace

Mat3 build_covariance(const GaussianParams& g) {
  return covariance_from(rotation_matrix(g.rotation), g.scales());
}

Mat3 build_pseudo_covariance(const GaussianParams& g, const DoGParams& d) {
  return covariance_from(rotation_matrix(g.rotation), g.scales().cwiseProduct(d.scale_factors()));
}

double pseudo_opacity(const GaussianParams& g, const DoGParams& d) { return d.alpha_factor() * g.opacity(); }

}  // namespace dogsplat
