#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hotspot/geometry.hpp"

namespace hotspot {

/// One line of a YOLO label file: `class cx cy w h`, normalized to [0, 1].
struct LabelEntry {
    int class_id = 0;
    BBox bbox;  ///< normalized units
};

/// Formats one annotation with six decimals, e.g. "2 0.125000 0.125000 0.062500 0.062500".
std::string format_label_line(const Annotation& annotation, int canvas_side);

/// Writes one newline-terminated line per annotation; an empty file when there
/// are none. Boxes must be in pixel units and inside the canvas.
void write_yolo_labels(const std::vector<Annotation>& annotations, int canvas_side, const std::filesystem::path& path);

std::vector<LabelEntry> read_yolo_labels(const std::filesystem::path& path);

}  // namespace hotspot
