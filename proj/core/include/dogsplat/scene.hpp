#pragma once

#include "dogsplat/math.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dogsplat {

constexpr int kMaxShDegree = 2;
constexpr int kMaxShCoeffs = (kMaxShDegree + 1) * (kMaxShDegree + 1);

constexpr int sh_coeff_count(int degree) { return (degree + 1) * (degree + 1); }

/// Default upper bound of the pseudo-Gaussian scale factors.
constexpr double kDefaultScaleFactorMax = 1.0;

/// Per-primitive latents of a vanilla Gaussian.
///
/// Everything is stored in its unconstrained space:
///   - rotation:   quaternion (w, x, y, z), normalized before use
///   - log_scales: s = exp(log_scales)
///   - opacity:    alpha = logistic(opacity_logit)
///   - sh:         RGB triplet per real spherical-harmonic coefficient,
///                 only the first sh_coeff_count(sh_degree) are meaningful
struct GaussianParams {
  Vec3 position = Vec3::Zero();
  Vec4 rotation = Vec4(1.0, 0.0, 0.0, 0.0);
  Vec3 log_scales = Vec3::Zero();
  double opacity_logit = 0.0;
  int sh_degree = 0;
  std::array<Vec3, kMaxShCoeffs> sh{};

  GaussianParams() { sh.fill(Vec3::Zero()); }

  Vec3 scales() const { return log_scales.array().exp(); }
  double opacity() const { return logistic(opacity_logit); }
};

/// The four pseudo-Gaussian latents of a 3D-DoG primitive plus its
/// activation flag. `scale_max` is the scene-wide bound f_s_max.
struct DoGParams {
  Vec3 scale_latent = Vec3::Zero();
  double alpha_latent = 0.0;
  bool active = false;
  double scale_max = kDefaultScaleFactorMax;

  /// (f_x, f_y, f_z) = logistic(scale_latent) * scale_max
  Vec3 scale_factors() const {
    return Vec3(logistic(scale_latent.x()), logistic(scale_latent.y()), logistic(scale_latent.z())) *
           scale_max;
  }
  /// f_alpha = logistic(alpha_latent); exactly 0 for alpha_latent = -inf.
  double alpha_factor() const { return logistic(alpha_latent); }
};

/// Parameter groups, each a flat array with a fixed per-primitive stride.
enum class ParamGroup : int {
  Position = 0,
  Rotation,
  LogScale,
  OpacityLogit,
  ShDc,
  ShRest,
  DogScaleLatent,
  DogAlphaLatent,
};

constexpr std::array<ParamGroup, 8> kAllParamGroups = {
    ParamGroup::Position,    ParamGroup::Rotation, ParamGroup::LogScale,       ParamGroup::OpacityLogit,
    ParamGroup::ShDc,        ParamGroup::ShRest,   ParamGroup::DogScaleLatent, ParamGroup::DogAlphaLatent};

const char* param_group_name(ParamGroup group);

/// Number of doubles one primitive occupies in `group`.
std::size_t group_stride(ParamGroup group, int sh_degree);

/// Structure-of-arrays storage shared by the scene latents, gradients and
/// optimizer moments, so a single index map compacts all of them.
struct ParamArrays {
  std::vector<double> position;
  std::vector<double> rotation;
  std::vector<double> log_scale;
  std::vector<double> opacity_logit;
  std::vector<double> sh_dc;
  std::vector<double> sh_rest;  // per primitive: coefficient-major RGB triplets for k = 1..K-1
  std::vector<double> dog_scale;
  std::vector<double> dog_alpha;

  static ParamArrays zeros(std::size_t count, int sh_degree);

  std::vector<double>& group(ParamGroup g);
  const std::vector<double>& group(ParamGroup g) const;

  /// Keeps the primitives listed in `keep` (ascending), in that order.
  void compact(std::span<const std::size_t> keep, int sh_degree);
  void set_zero();

  bool operator==(const ParamArrays&) const = default;
};

/// Primitive population. All arrays have length `size()` times their stride.
class SceneModel {
 public:
  explicit SceneModel(int sh_degree = 0, double scale_factor_max = kDefaultScaleFactorMax);

  std::size_t size() const { return dog_active_.size(); }
  bool empty() const { return size() == 0; }
  std::size_t dog_count() const;

  int sh_degree() const { return sh_degree_; }
  double scale_factor_max() const { return scale_factor_max_; }

  GaussianParams gaussian(std::size_t i) const;
  DoGParams dog(std::size_t i) const;
  void set_gaussian(std::size_t i, const GaussianParams& g);
  void set_dog(std::size_t i, const DoGParams& d);
  void set_dog_active(std::size_t i, bool active) { dog_active_[i] = active ? 1 : 0; }
  bool dog_active(std::size_t i) const { return dog_active_[i] != 0; }

  std::size_t push_back(const GaussianParams& g, const DoGParams& d = {});

  /// Retains only `keep` (strictly ascending indices).
  void compact(std::span<const std::size_t> keep);

  /// Renormalizes every quaternion to unit length.
  void normalize_rotations();

  ParamArrays& params() { return params_; }
  const ParamArrays& params() const { return params_; }
  const std::vector<std::uint8_t>& dog_active_flags() const { return dog_active_; }

  bool operator==(const SceneModel& other) const = default;

 private:
  int sh_degree_;
  double scale_factor_max_;
  ParamArrays params_;
  std::vector<std::uint8_t> dog_active_;
};

/// Rotation matrix of the normalized quaternion (w, x, y, z).
Mat3 rotation_matrix(const Vec4& q);

/// Sigma = R S S^T R^T
Mat3 build_covariance(const GaussianParams& g);

/// Sigma_p = R S_p S_p^T R^T with S_p = diag(s * f).
Mat3 build_pseudo_covariance(const GaussianParams& g, const DoGParams& d);

/// alpha_p = f_alpha * alpha
double pseudo_opacity(const GaussianParams& g, const DoGParams& d);

}  // namespace dogsplat
