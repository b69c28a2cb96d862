#include "dogsplat/io/dataset.hpp"

#include "dogsplat/errors.hpp"
#include "dogsplat/io/png.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dogsplat {

std::vector<NamedCamera> read_cameras(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<NamedCamera> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    NamedCamera nc;
    Camera& c = nc.camera;
    bool ok = static_cast<bool>(ls >> nc.name);
    for (int r = 0; r < 3 && ok; ++r)
      for (int k = 0; k < 3 && ok; ++k) ok = static_cast<bool>(ls >> c.rotation(r, k));
    for (int k = 0; k < 3 && ok; ++k) ok = static_cast<bool>(ls >> c.translation[k]);
    ok = ok && (ls >> c.fx >> c.fy >> c.cx >> c.cy >> c.width >> c.height);
    std::string extra;
    if (!ok || (ls >> extra))
      throw ParseError("line " + std::to_string(lineno) + ": expected filename, 12 extrinsics, 4 intrinsics, width, height",
                       lineno);
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), lineno);
    }
    out.push_back(std::move(nc));
  }
  return out;
}

void write_cameras(const std::string& path, const std::vector<NamedCamera>& cameras) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path);
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    out << buf;
  };
  for (const auto& nc : cameras) {
    const Camera& c = nc.camera;
    out << nc.name;
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) num(c.rotation(r, k));
    for (int k = 0; k < 3; ++k) num(c.translation[k]);
    num(c.fx);
    num(c.fy);
    num(c.cx);
    num(c.cy);
    out << ' ' << c.width << ' ' << c.height << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

Dataset load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw IoError("not a directory: " + dir);
  Dataset d;
  for (auto& nc : read_cameras((root / kCameraFileName).string())) {
    ImageBuffer img = read_png((root / nc.name).string());
    if (img.width != nc.camera.width || img.height != nc.camera.height)
      throw DimensionMismatch(nc.name + ": image size differs from its camera");
    d.cameras.push_back(nc.camera);
    d.images.push_back(std::move(img));
    d.names.push_back(nc.name);
  }
  return d;
}

void save_dataset(const std::string& dir, const Dataset& data) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);
  std::vector<NamedCamera> cams;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::string name;
    if (i < data.names.size()) {
      name = data.names[i];
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "view_%03zu.png", i);
      name = buf;
    }
    write_png((root / name).string(), data.images[i]);
    cams.push_back({name, data.cameras[i]});
  }
  write_cameras((root / kCameraFileName).string(), cams);
}

}  // namespace dogsplat
