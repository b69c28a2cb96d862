#pragma once

#include "dogsplat/rasterizer.hpp"

#include <cstdint>
#include <string>

namespace dogsplat {

/// round(clamp(v, 0, 1) * 255), halves rounded up.
std::uint8_t quantize_channel(double v);

/// 8-bit RGB only. Values are divided by 255, no gamma transform.
/// Throws IoError, ParseError, or UnsupportedFormat for other bit depths
/// and channel layouts.
ImageBuffer read_png(const std::string& path);

/// Clamps and quantizes with quantize_channel().
void write_png(const std::string& path, const ImageBuffer& image);

}  // namespace dogsplat
