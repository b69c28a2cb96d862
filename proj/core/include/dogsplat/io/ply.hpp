#pragma once

#include "dogsplat/scene.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dogsplat {

/// Binary little-endian PLY in the 3DGS vertex layout
///   x y z nx ny nz f_dc_0..2 f_rest_* opacity scale_0..2 rot_0..3
/// followed by the DoG latents f_alpha f_sx f_sy f_sz and dog_active.
/// Values are stored as float32 latents; f_rest is channel-major.
void write_ply(const SceneModel& scene, std::ostream& out);
void write_ply(const SceneModel& scene, const std::string& path);

/// Accepts any property order and ignores unknown properties. Files
/// without the DoG properties load with every DoG inactive. Throws
/// ParseError (byte offset) for malformed or truncated input, SchemaError
/// naming missing properties, UnsupportedFormat for non-binary-LE files.
SceneModel read_ply(const std::vector<char>& bytes);
SceneModel read_ply(const std::string& path);

}  // namespace dogsplat
