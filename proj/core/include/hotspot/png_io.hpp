#pragma once

#include <filesystem>

#include "hotspot/raster.hpp"

namespace hotspot {

/// Reads an 8-bit grayscale PNG. Colour, alpha and 16-bit files are rejected
/// with IoError so that clip data is never silently converted.
GrayRaster read_gray_png(const std::filesystem::path& path);

/// Reads an 8-bit RGB PNG (used for round-tripping augmented outputs).
RgbRaster read_rgb_png(const std::filesystem::path& path);

void write_gray_png(const std::filesystem::path& path, const GrayRaster& raster);
void write_rgb_png(const std::filesystem::path& path, const RgbRaster& raster);

}  // namespace hotspot
