#pragma once

#include "dogsplat/camera.hpp"
#include "dogsplat/rasterizer.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dogsplat {

/// Posed images. `names` may be empty; when present it holds one file name
/// per view.
struct Dataset {
  std::vector<Camera> cameras;
  std::vector<ImageBuffer> images;
  std::vector<std::string> names;

  std::size_t size() const { return cameras.size(); }
  bool empty() const { return cameras.empty(); }
};

}  // namespace dogsplat
