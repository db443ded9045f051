#include "hotspot/mosaic.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "hotspot/errors.hpp"

namespace hotspot::synth {

BBox hotspot_box(const PixelRect& clip_rect, int box_side) {
    return BBox{clip_rect.x + clip_rect.w / 2.0, clip_rect.y + clip_rect.h / 2.0, static_cast<double>(box_side),
                static_cast<double>(box_side), BoxUnits::Pixels};
}

Band hotspot_band(const BBox& box, int margin) {
    return Band{static_cast<int>(std::floor(box.top())) - margin, static_cast<int>(std::ceil(box.bottom())) + margin};
}

int hotspot_box_side(int clip_side, double box_fraction) {
    const double side = box_fraction * clip_side;
    if (!(box_fraction > 0.0 && box_fraction <= 1.0) || side != std::floor(side)) {
        throw ContractViolation(
            fmt::format("hotspot box fraction {} of a {}-pixel clip is not a whole pixel count", box_fraction, clip_side));
    }
    return static_cast<int>(side);
}

std::vector<PixelRect> grid_rects(int rows, int cols, int clip_side) {
    if (rows < 1 || cols < 1 || clip_side < 1) throw ContractViolation("grid dimensions must be positive");
    std::vector<PixelRect> rects;
    rects.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) rects.push_back({c * clip_side, r * clip_side, clip_side, clip_side});
    }
    return rects;
}

std::vector<PixelRect> jittered_rects(int rows, int cols, int clip_side, int canvas_side, Rng& rng) {
    if (rows < 1 || cols < 1 || clip_side < 1) throw ContractViolation("layout dimensions must be positive");
    if (cols * clip_side > canvas_side) {
        throw ContractViolation(
            fmt::format("{} clips of {} px do not fit in a {} px row", cols, clip_side, canvas_side));
    }
    const int band = canvas_side / rows;
    if (band < clip_side) {
        throw ContractViolation(fmt::format("{} rows of {} px clips do not fit a {} px canvas", rows, clip_side, canvas_side));
    }
    const int free_width = canvas_side - cols * clip_side;
    const auto range = static_cast<std::uint64_t>(free_width) + static_cast<std::uint64_t>(cols);

    std::vector<PixelRect> rects;
    rects.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    std::vector<int> picks;
    for (int r = 0; r < rows; ++r) {
        const int y = r * band + (band - clip_side) / 2;
        picks.clear();
        while (static_cast<int>(picks.size()) < cols) {
            const int v = static_cast<int>(rng.below(range));
            if (std::find(picks.begin(), picks.end(), v) == picks.end()) picks.push_back(v);
        }
        std::sort(picks.begin(), picks.end());
        for (int i = 0; i < cols; ++i) rects.push_back({picks[i] - i + i * clip_side, y, clip_side, clip_side});
    }
    return rects;
}

Composition compose(std::span<const ClipRecord> clips, std::span<const PixelRect> rects, int cols, int canvas_side,
                    int box_side, const std::string& image_id) {
    if (clips.size() != rects.size()) {
        throw ContractViolation(fmt::format("{} clips for {} placements", clips.size(), rects.size()));
    }
    if (cols < 1) throw ContractViolation("cols must be positive");

    Composition out{GrayRaster(canvas_side, canvas_side, 0), {}, {}};
    out.placements.reserve(clips.size());
    for (std::size_t i = 0; i < clips.size(); ++i) {
        const auto& clip = clips[i];
        const auto& rect = rects[i];
        if (clip.side() != rect.w || rect.w != rect.h) {
            throw ContractViolation(fmt::format("clip '{}' is {} px, placement expects {} px", clip.id(), clip.side(), rect.w));
        }
        out.image.paste(clip.raster(), rect.x, rect.y);
        out.placements.push_back(
            {clip.id(), rect, static_cast<int>(i) / cols, clip.is_hotspot(), clip.class_id()});
        if (clip.is_hotspot()) {
            out.annotations.push_back({image_id, *clip.class_id(), hotspot_box(rect, box_side)});
        }
    }
    return out;
}

Composition compose_grid(std::span<const ClipRecord> clips, int rows, int cols, int clip_side, int canvas_side,
                         double box_fraction, const std::string& image_id) {
    if (static_cast<long long>(rows) * cols != static_cast<long long>(clips.size())) {
        throw ContractViolation(fmt::format("grid {}x{} needs {} clips, got {}", rows, cols, rows * cols, clips.size()));
    }
    if (rows * clip_side > canvas_side || cols * clip_side > canvas_side) {
        throw ContractViolation("grid does not fit the canvas");
    }
    const auto rects = grid_rects(rows, cols, clip_side);
    return compose(clips, rects, cols, canvas_side, hotspot_box_side(clip_side, box_fraction), image_id);
}

Composition compose_jittered(std::span<const ClipRecord> clips, int rows, int cols, int clip_side, Rng& rng,
                             int canvas_side, double box_fraction, const std::string& image_id) {
    if (static_cast<long long>(rows) * cols != static_cast<long long>(clips.size())) {
        throw ContractViolation(fmt::format("layout {}x{} needs {} clips, got {}", rows, cols, rows * cols, clips.size()));
    }
    const auto rects = jittered_rects(rows, cols, clip_side, canvas_side, rng);
    return compose(clips, rects, cols, canvas_side, hotspot_box_side(clip_side, box_fraction), image_id);
}

WireResult route_wires(GrayRaster image, std::span<const Placement> placements, std::span<const BBox> hotspot_boxes,
                       const WireParams& params, Rng& rng) {
    if (params.wire_width < 1 || params.wires_per_pair < 0) throw ContractViolation("invalid wire parameters");
    for (std::size_t i = 0; i < placements.size(); ++i) {
        for (std::size_t j = i + 1; j < placements.size(); ++j) {
            if (placements[i].rect.intersects(placements[j].rect)) throw ContractViolation("placements overlap");
        }
    }

    WireResult out{std::move(image), {}, 0};
    if (params.wires_per_pair == 0) return out;

    std::vector<Band> bands;
    bands.reserve(hotspot_boxes.size());
    for (const auto& box : hotspot_boxes) bands.push_back(hotspot_band(box, params.wire_width));

    int max_row = -1;
    for (const auto& p : placements) max_row = std::max(max_row, p.row);

    std::vector<const Placement*> row;
    std::vector<int> legal;
    for (int r = 0; r <= max_row; ++r) {
        row.clear();
        for (const auto& p : placements) {
            if (p.row == r) row.push_back(&p);
        }
        std::sort(row.begin(), row.end(), [](const Placement* a, const Placement* b) { return a->rect.x < b->rect.x; });

        for (std::size_t i = 0; i + 1 < row.size(); ++i) {
            const PixelRect& left = row[i]->rect;
            const PixelRect& right = row[i + 1]->rect;
            const int x0 = left.right();
            const int gap = right.x - x0;
            if (gap <= 0) continue;
            const int span_top = std::max(left.y, right.y);
            const int span_bottom = std::min(left.bottom(), right.bottom());

            std::vector<PixelRect> drawn;
            for (int w = 0; w < params.wires_per_pair; ++w) {
                legal.clear();
                for (int y = span_top; y + params.wire_width <= span_bottom; ++y) {
                    const int y1 = y + params.wire_width;
                    const PixelRect candidate{x0, y, gap, params.wire_width};
                    const bool in_band =
                        std::any_of(bands.begin(), bands.end(), [&](const Band& b) { return b.overlaps(y, y1); });
                    const bool near_wire = std::any_of(drawn.begin(), drawn.end(), [&](const PixelRect& d) {
                        return y < d.bottom() + 1 && d.y - 1 < y1;
                    });
                    const bool hits_clip = std::any_of(placements.begin(), placements.end(),
                                                       [&](const Placement& p) { return p.rect.intersects(candidate); });
                    if (!in_band && !near_wire && !hits_clip) legal.push_back(y);
                }
                if (legal.empty()) {
                    ++out.skipped;
                    spdlog::warn("no legal position for wire {} between '{}' and '{}'; skipped", w, row[i]->clip_id,
                                 row[i + 1]->clip_id);
                    continue;
                }
                const int y = legal[rng.below(legal.size())];
                const PixelRect wire{x0, y, gap, params.wire_width};
                out.image.fill_rect(wire.x, wire.y, wire.w, wire.h, 255);
                drawn.push_back(wire);
                out.wires.push_back(wire);
            }
        }
    }
    return out;
}

}  // namespace hotspot::synth
