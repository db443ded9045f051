#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hotspot/raster.hpp"

namespace hotspot {

/// A rasterized square layout clip. `class_id` is present exactly when the
/// clip is a hotspot.
class ClipRecord {
public:
    ClipRecord(std::string id, GrayRaster raster, bool is_hotspot, std::optional<int> class_id);

    const std::string& id() const noexcept { return id_; }
    const GrayRaster& raster() const noexcept { return raster_; }
    int side() const noexcept { return raster_.width(); }
    bool is_hotspot() const noexcept { return is_hotspot_; }
    std::optional<int> class_id() const noexcept { return class_id_; }

private:
    std::string id_;
    GrayRaster raster_;
    bool is_hotspot_;
    std::optional<int> class_id_;
};

/// Reads `index.json` plus the referenced grayscale PNGs from `dir`.
/// Errors name the offending entry id.
std::vector<ClipRecord> load_clip_library(const std::filesystem::path& dir);

/// Writes the library in the layout `load_clip_library` reads: one PNG per
/// clip under `dir` and an `index.json` listing them in order.
void save_clip_library(const std::filesystem::path& dir, const std::vector<ClipRecord>& clips);

/// Nearest-neighbour resample to target_side x target_side. Destination pixel
/// d samples source pixel floor((2d + 1) * S / (2 * target_side)), i.e. the
/// source pixel under the destination pixel centre. Never invents new values.
GrayRaster resize_nearest(const GrayRaster& src, int target_side);
ClipRecord resize_clip(const ClipRecord& clip, int target_side);

}  // namespace hotspot
