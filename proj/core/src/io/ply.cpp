#include "dogsplat/io/ply.hpp"

#include "dogsplat/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

namespace dogsplat {

static_assert(std::endian::native == std::endian::little, "PLY writer assumes a little-endian host");

namespace {

constexpr const char* kDogNames[] = {"f_alpha", "f_sx", "f_sy", "f_sz", "dog_active"};

std::vector<std::string> float_property_names(int sh_degree) {
  std::vector<std::string> n = {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"};
  const int rest = 3 * (sh_coeff_count(sh_degree) - 1);
  for (int i = 0; i < rest; ++i) n.push_back("f_rest_" + std::to_string(i));
  for (const char* s : {"opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3", "f_alpha",
                        "f_sx", "f_sy", "f_sz"})
    n.emplace_back(s);
  return n;
}

struct Property {
  std::string name;
  std::string type;
  std::size_t size = 0;
  std::size_t offset = 0;
};

std::size_t type_size(const std::string& t) {
  static const std::map<std::string, std::size_t> sizes = {
      {"char", 1},   {"uchar", 1},  {"int8", 1},   {"uint8", 1},  {"short", 2},   {"ushort", 2},
      {"int16", 2},  {"uint16", 2}, {"int", 4},    {"uint", 4},   {"int32", 4},   {"uint32", 4},
      {"float", 4},  {"float32", 4}, {"double", 8}, {"float64", 8}};
  const auto it = sizes.find(t);
  return it == sizes.end() ? 0 : it->second;
}

template <typename T>
T load(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

double read_value(const Property& prop, const char* p) {
  const std::string& t = prop.type;
  if (t == "float" || t == "float32") return load<float>(p);
  if (t == "double" || t == "float64") return load<double>(p);
  if (t == "char" || t == "int8") return load<std::int8_t>(p);
  if (t == "uchar" || t == "uint8") return load<std::uint8_t>(p);
  if (t == "short" || t == "int16") return load<std::int16_t>(p);
  if (t == "ushort" || t == "uint16") return load<std::uint16_t>(p);
  if (t == "int" || t == "int32") return load<std::int32_t>(p);
  return load<std::uint32_t>(p);
}

}  // namespace

void write_ply(const SceneModel& scene, std::ostream& out) {
  const int deg = scene.sh_degree();
  const auto names = float_property_names(deg);
  std::ostringstream h;
  h << "ply\nformat binary_little_endian 1.0\n";
  h.precision(17);
  h << "comment f_s_max " << scene.scale_factor_max() << "\n";
  h << "element vertex " << scene.size() << "\n";
  for (const auto& n : names) h << "property float " << n << "\n";
  h << "property uchar dog_active\nend_header\n";
  const std::string header = h.str();
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  const auto& p = scene.params();
  const int rest = sh_coeff_count(deg) - 1;
  std::vector<float> row;
  for (std::size_t i = 0; i < scene.size(); ++i) {
    row.clear();
    for (int c = 0; c < 3; ++c) row.push_back(static_cast<float>(p.position[3 * i + c]));
    for (int c = 0; c < 3; ++c) row.push_back(0.0f);
    for (int c = 0; c < 3; ++c) row.push_back(static_cast<float>(p.sh_dc[3 * i + c]));
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < rest; ++k)
        row.push_back(static_cast<float>(p.sh_rest[i * 3 * rest + 3 * static_cast<std::size_t>(k) + c]));
    row.push_back(static_cast<float>(p.opacity_logit[i]));
    for (int c = 0; c < 3; ++c) row.push_back(static_cast<float>(p.log_scale[3 * i + c]));
    for (int c = 0; c < 4; ++c) row.push_back(static_cast<float>(p.rotation[4 * i + c]));
    row.push_back(static_cast<float>(p.dog_alpha[i]));
    for (int c = 0; c < 3; ++c) row.push_back(static_cast<float>(p.dog_scale[3 * i + c]));
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    const char active = scene.dog_active(i) ? 1 : 0;
    out.write(&active, 1);
  }
}

void write_ply(const SceneModel& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path);
  write_ply(scene, out);
  if (!out) throw IoError("write failed: " + path);
}

SceneModel read_ply(const std::vector<char>& bytes) {
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    const std::size_t start = pos;
    while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    if (pos >= bytes.size()) throw ParseError("byte " + std::to_string(start) + ": unterminated header", start);
    std::string line(bytes.data() + start, pos - start);
    ++pos;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  if (next_line() != "ply") throw ParseError("byte 0: missing 'ply' magic", 0);
  std::optional<std::size_t> count;
  bool in_vertex = false;
  bool vertex_done = false;
  double f_s_max = kDefaultScaleFactorMax;
  std::vector<Property> props;
  std::size_t stride = 0;
  for (;;) {
    const std::size_t line_start = pos;
    const std::string line = next_line();
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "end_header") break;
    if (kw == "format") {
      std::string fmt, version;
      ls >> fmt >> version;
      if (fmt != "binary_little_endian") throw UnsupportedFormat("PLY format '" + fmt + "' is not supported");
    } else if (kw == "comment") {
      std::string key;
      ls >> key;
      if (key == "f_s_max") {
        if (!(ls >> f_s_max) || !(f_s_max > 0.0))
          throw ParseError("byte " + std::to_string(line_start) + ": bad f_s_max comment", line_start);
      }
    } else if (kw == "element") {
      std::string name;
      std::size_t n = 0;
      if (!(ls >> name >> n)) throw ParseError("byte " + std::to_string(line_start) + ": bad element line", line_start);
      if (in_vertex) vertex_done = true;
      in_vertex = name == "vertex";
      if (in_vertex) count = n;
      else if (!vertex_done && n > 0)
        throw UnsupportedFormat("element '" + name + "' before vertex data is not supported");
    } else if (kw == "property") {
      std::string type, name;
      if (!(ls >> type >> name)) throw ParseError("byte " + std::to_string(line_start) + ": bad property line", line_start);
      if (!in_vertex) continue;
      if (type == "list") throw UnsupportedFormat("list properties on vertices are not supported");
      const std::size_t size = type_size(type);
      if (size == 0) throw ParseError("byte " + std::to_string(line_start) + ": unknown type '" + type + "'", line_start);
      props.push_back(Property{name, type, size, stride});
      stride += size;
    } else if (kw != "obj_info" && !kw.empty()) {
      throw ParseError("byte " + std::to_string(line_start) + ": unexpected header keyword '" + kw + "'", line_start);
    }
  }
  if (!count) throw SchemaError("missing properties: vertex element");

  std::map<std::string, const Property*> by_name;
  for (const auto& p : props) by_name[p.name] = &p;

  int deg = -1;
  int rest_count = 0;
  while (by_name.count("f_rest_" + std::to_string(rest_count))) ++rest_count;
  for (int d = 0; d <= kMaxShDegree; ++d)
    if (3 * (sh_coeff_count(d) - 1) == rest_count) deg = d;
  if (deg < 0) throw SchemaError("f_rest count " + std::to_string(rest_count) + " matches no SH degree");

  std::vector<std::string> required = {"x",       "y",       "z",       "f_dc_0", "f_dc_1", "f_dc_2", "opacity",
                                       "scale_0", "scale_1", "scale_2", "rot_0",  "rot_1",  "rot_2",  "rot_3"};
  std::string missing;
  for (const auto& r : required)
    if (!by_name.count(r)) missing += (missing.empty() ? "" : ", ") + r;
  if (!missing.empty()) throw SchemaError("missing properties: " + missing);

  int dog_present = 0;
  for (const char* n : kDogNames) dog_present += by_name.count(n) ? 1 : 0;
  if (dog_present != 0 && dog_present != 5) {
    std::string m;
    for (const char* n : kDogNames)
      if (!by_name.count(n)) m += (m.empty() ? "" : ", ") + std::string(n);
    throw SchemaError("missing properties: " + m);
  }

  const std::size_t data_start = pos;
  const std::size_t need = *count * stride;
  if (bytes.size() - data_start < need) {
    const std::size_t rows = stride ? (bytes.size() - data_start) / stride : 0;
    const std::size_t at = data_start + rows * stride;
    throw ParseError("byte " + std::to_string(at) + ": truncated vertex data (" + std::to_string(rows) + " of " +
                         std::to_string(*count) + " vertices)",
                     at);
  }

  SceneModel scene(deg, f_s_max);
  const int rest = sh_coeff_count(deg) - 1;
  for (std::size_t i = 0; i < *count; ++i) {
    const char* row = bytes.data() + data_start + i * stride;
    auto get = [&](const std::string& n) { const Property* p = by_name.at(n); return read_value(*p, row + p->offset); };
    GaussianParams g;
    g.sh_degree = deg;
    g.position = Vec3(get("x"), get("y"), get("z"));
    g.sh[0] = Vec3(get("f_dc_0"), get("f_dc_1"), get("f_dc_2"));
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < rest; ++k) g.sh[k + 1][c] = get("f_rest_" + std::to_string(c * rest + k));
    g.opacity_logit = get("opacity");
    g.log_scales = Vec3(get("scale_0"), get("scale_1"), get("scale_2"));
    g.rotation = Vec4(get("rot_0"), get("rot_1"), get("rot_2"), get("rot_3"));
    DoGParams d;
    d.scale_max = f_s_max;
    bool active = false;
    if (dog_present) {
      d.alpha_latent = get("f_alpha");
      d.scale_latent = Vec3(get("f_sx"), get("f_sy"), get("f_sz"));
      active = get("dog_active") != 0.0;
    }
    const std::size_t idx = scene.push_back(g, d);
    scene.set_dog_active(idx, active);
  }
  return scene;
}

SceneModel read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_ply(bytes);
}

}  // namespace dogsplat
