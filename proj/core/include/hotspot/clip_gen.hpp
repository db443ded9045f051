#pragma once

#include <cstdint>
#include <vector>

#include "hotspot/clip.hpp"

namespace hotspot {

/// Procedural stand-in for a rasterized clip benchmark: Manhattan wire
/// patterns on a 0/255 canvas. Non-hotspot clips hold regularly spaced
/// wires; hotspot clips add a defect-like motif at the clip centre whose
/// shape depends on the class (0: facing line ends, 1: tight parallel
/// lines, 2: corner against a wire, 3: dense via cluster).
struct SyntheticLibrarySpec {
    int side = 256;
    int non_hotspot = 24;
    int hotspot_per_class = 4;
    std::uint64_t seed = 1;
};

std::vector<ClipRecord> make_synthetic_library(const SyntheticLibrarySpec& spec);

}  // namespace hotspot
