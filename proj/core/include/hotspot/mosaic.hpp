#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hotspot/clip.hpp"
#include "hotspot/geometry.hpp"
#include "hotspot/raster.hpp"
#include "hotspot/rng.hpp"

namespace hotspot::synth {

/// A clip pasted onto a canvas.
struct Placement {
    std::string clip_id;
    PixelRect rect;
    int row = 0;
    bool is_hotspot = false;
    std::optional<int> class_id;
};

struct Composition {
    GrayRaster image;
    std::vector<Placement> placements;  ///< row-major, left to right within a row
    std::vector<Annotation> annotations;
};

/// Box of side `box_side` centred on the clip rectangle. The box is exact
/// (possibly half-pixel centred); see hotspot_band for the pixel extent.
BBox hotspot_box(const PixelRect& clip_rect, int box_side);

/// Pixel rows [top, bottom) touched by a hotspot box, widened by `margin`.
struct Band {
    int top = 0;
    int bottom = 0;
    bool overlaps(int y0, int y1) const noexcept { return y0 < bottom && top < y1; }
};
Band hotspot_band(const BBox& box, int margin);

/// Side of the hotspot box for a clip of `clip_side` pixels. Throws if the
/// fraction does not produce a whole number of pixels.
int hotspot_box_side(int clip_side, double box_fraction);

/// Clip (r, c) at [c*side, (c+1)*side) x [r*side, (r+1)*side).
std::vector<PixelRect> grid_rects(int rows, int cols, int clip_side);

/// Row r is vertically centred in its canvas_side/rows band. Within a row the
/// free width F = canvas_side - cols*clip_side is split into cols+1
/// non-negative gaps, uniformly over all such splits: draw cols distinct
/// integers from [0, F + cols) without replacement (successive `below` draws,
/// redrawing duplicates), sort them to s_0 < ... < s_{cols-1}, and place clip
/// i at x = s_i - i + i*clip_side. Rows are processed top to bottom from the
/// same stream.
std::vector<PixelRect> jittered_rects(int rows, int cols, int clip_side, int canvas_side, Rng& rng);

/// Pastes clips[i] at rects[i] on a blank canvas and annotates hotspots.
Composition compose(std::span<const ClipRecord> clips, std::span<const PixelRect> rects, int cols, int canvas_side,
                    int box_side, const std::string& image_id = {});

Composition compose_grid(std::span<const ClipRecord> clips, int rows, int cols, int clip_side,
                         int canvas_side = 1024, double box_fraction = 0.25, const std::string& image_id = {});

Composition compose_jittered(std::span<const ClipRecord> clips, int rows, int cols, int clip_side, Rng& rng,
                             int canvas_side = 1024, double box_fraction = 0.25, const std::string& image_id = {});

struct WireParams {
    int wire_width = 3;
    int wires_per_pair = 2;
};

struct WireResult {
    GrayRaster image;
    std::vector<PixelRect> wires;
    int skipped = 0;  ///< wires with no legal vertical position
};

/// Draws horizontal foreground wires between horizontally adjacent clips of
/// each row. A wire spans the gap between the two clips exactly and sits in
/// their shared vertical span, outside every hotspot band (each hotspot box's
/// rows widened by wire_width) and at least one pixel away from wires already
/// drawn in the same gap. Pixels inside clip rectangles are never touched.
WireResult route_wires(GrayRaster image, std::span<const Placement> placements, std::span<const BBox> hotspot_boxes,
                       const WireParams& params, Rng& rng);

}  // namespace hotspot::synth
