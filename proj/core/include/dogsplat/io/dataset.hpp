#pragma once

#include "dogsplat/dataset.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dogsplat {

/// Name of the camera file inside a dataset directory.
inline constexpr const char* kCameraFileName = "cameras.txt";

struct NamedCamera {
  std::string name;
  Camera camera;
};

/// One view per line:
///   filename r00 r01 r02 r10 r11 r12 r20 r21 r22 tx ty tz fx fy cx cy width height
/// Blank lines and lines starting with '#' are skipped. Throws ParseError
/// naming the line.
std::vector<NamedCamera> read_cameras(const std::string& path);
void write_cameras(const std::string& path, const std::vector<NamedCamera>& cameras);

/// Reads the camera file and every image it names from `dir`.
Dataset load_dataset(const std::string& dir);
/// Writes PNGs and the camera file; views without a name get view_NNN.png.
void save_dataset(const std::string& dir, const Dataset& data);

}  // namespace dogsplat
