#pragma once

#include <filesystem>

#include "hotspot/features.hpp"

namespace hotspot::features {

/// Sidecar JSON: {"tile_side": int, "tiles_x": int, "tiles_y": int, "k": [int...]}.
void write_kmap_json(const std::filesystem::path& path, const KMap& map);
KMap read_kmap_json(const std::filesystem::path& path);

/// Binary grid of the fused map: the 8 magic bytes "KMAPF32\0", width and
/// height as little-endian uint32, then width*height little-endian float32
/// values, row-major.
void write_fused_f32(const std::filesystem::path& path, const FusedMap& map);
FusedMap read_fused_f32(const std::filesystem::path& path);

}  // namespace hotspot::features
