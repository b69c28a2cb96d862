#pragma once

#include "dogsplat/camera.hpp"
#include "dogsplat/projection.hpp"
#include "dogsplat/scene.hpp"

#include <cstddef>
#include <vector>

namespace dogsplat {

/// |beta| is clamped to this bound, symmetric for negative DoG weights.
constexpr double kWeightClamp = 0.99;
/// Contributions with |beta| below this are skipped.
constexpr double kMinWeight = 1.0 / 255.0;
/// A pixel stops accumulating once its transmittance drops below this.
constexpr double kMinTransmittance = 1e-4;

struct RenderOptions {
  Vec3 background = Vec3::Zero();
  int tile_size = 16;
  int threads = 1;
};

/// Row-major RGB image. Values are left unclamped; clamp only for metrics
/// and file output.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<double> rgb;            // 3 * width * height
  std::vector<double> transmittance;  // final T per pixel (may be empty)
  std::vector<int> contributors;      // blended splats per pixel (may be empty)

  static ImageBuffer filled(int width, int height, const Vec3& value);

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  double& at(int x, int y, int c) { return rgb[3 * (static_cast<std::size_t>(y) * width + x) + c]; }
  double at(int x, int y, int c) const { return rgb[3 * (static_cast<std::size_t>(y) * width + x) + c]; }
  Vec3 pixel(int x, int y) const { return Vec3(at(x, y, 0), at(x, y, 1), at(x, y, 2)); }
  bool same_shape(const ImageBuffer& other) const { return width == other.width && height == other.height; }
};

struct EffectiveWeight {
  double beta = 0.0;     // clamped weight used for blending
  double raw = 0.0;      // alpha' - alpha_p'
  double gauss = 0.0;    // exp(-q/2) of the primary conic
  double pseudo = 0.0;   // exp(-q/2) of the pseudo conic (0 without DoG)
  bool clamped = false;
};

/// beta at pixel position `x`: alpha * G - alpha_p * G_p, clamped to
/// [-0.99, 0.99]. The pseudo term is evaluated only when the splat carries
/// a pseudo conic.
EffectiveWeight effective_weight(const Splat2D& splat, double alpha, double alpha_p, const Vec2& x);

/// A splat ready for blending, in depth order.
struct PreparedSplat {
  std::size_t index = 0;  // position in the scene
  Splat2D splat;
  double alpha = 0.0;
  double alpha_factor = 0.0;  // f_alpha (0 when the DoG is inactive)
  double alpha_p = 0.0;
  Vec3 color = Vec3::Zero();
  Vec3 view_dir = Vec3::UnitZ();
};

/// Per-view render state: culled, colour-decoded splats sorted by
/// (depth, index), plus per-tile splat lists.
class RenderFrame {
 public:
  RenderFrame(const SceneModel& scene, const Camera& camera, const RenderOptions& options);

  const Camera& camera() const { return camera_; }
  const RenderOptions& options() const { return options_; }
  const std::vector<PreparedSplat>& splats() const { return splats_; }
  int tiles_x() const { return tiles_x_; }
  int tiles_y() const { return tiles_y_; }
  std::size_t tile_count() const { return tile_lists_.size(); }
  /// Positions into splats(), ascending.
  const std::vector<std::size_t>& tile_list(std::size_t tile) const { return tile_lists_[tile]; }
  std::size_t scene_size() const { return scene_size_; }

 private:
  Camera camera_;
  RenderOptions options_;
  std::size_t scene_size_ = 0;
  std::vector<PreparedSplat> splats_;
  int tiles_x_ = 0;
  int tiles_y_ = 0;
  std::vector<std::vector<std::size_t>> tile_lists_;
};

/// Reference path: every pixel walks the globally sorted splat list.
ImageBuffer render_naive(const SceneModel& scene, const Camera& camera, const RenderOptions& options = {});

/// Tiled path over 16x16 tiles; matches render_naive.
ImageBuffer render_tiled(const SceneModel& scene, const Camera& camera, const RenderOptions& options = {});
ImageBuffer render_tiled(const RenderFrame& frame);

/// Gradients for every latent, laid out like the scene parameters.
struct GradientBundle {
  int sh_degree = 0;
  ParamArrays params;
  /// Sum over pixels and channels of (dI/d alpha_i)^2, alpha_i activated.
  std::vector<double> spatial_sq_grad;

  std::size_t size() const { return spatial_sq_grad.size(); }
};

/// Exact reverse mode of render_tiled for the loss whose image adjoint is
/// `dL_dI` (only its rgb is read).
GradientBundle backward(const SceneModel& scene, const Camera& camera, const ImageBuffer& dL_dI,
                        const RenderOptions& options = {});
GradientBundle backward(const SceneModel& scene, const RenderFrame& frame, const ImageBuffer& dL_dI);

/// Sparse per-primitive fields J_i(x, c) = dI(x, c) / d alpha_i.
struct OpacityGradientFields {
  struct Entry {
    std::size_t pixel = 0;  // y * width + x
    Vec3 value = Vec3::Zero();
  };
  int width = 0;
  int height = 0;
  std::vector<std::vector<Entry>> per_primitive;
  /// Same quantity and reduction order as GradientBundle::spatial_sq_grad.
  std::vector<double> spatial_sq_grad;
};

OpacityGradientFields opacity_gradient_fields(const SceneModel& scene, const RenderFrame& frame);
OpacityGradientFields opacity_gradient_fields(const SceneModel& scene, const Camera& camera,
                                              const RenderOptions& options = {});

/// Which primitives blended into one pixel, in order, and whether their
/// weight hit the clamp. Used to detect when a perturbation crosses one of
/// the renderer's discrete cutoffs.
struct PixelContribution {
  std::size_t index = 0;
  bool clamped = false;
  bool operator==(const PixelContribution&) const = default;
};
std::vector<std::vector<PixelContribution>> contribution_trace(const SceneModel& scene, const Camera& camera,
                                                               const RenderOptions& options = {});

}  // namespace dogsplat
