#include "hotspot/clip_gen.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "hotspot/errors.hpp"
#include "hotspot/rng.hpp"

namespace hotspot {

namespace {

void safe_fill(GrayRaster& r, int x, int y, int w, int h) {
    const int x0 = std::clamp(x, 0, r.width());
    const int y0 = std::clamp(y, 0, r.height());
    const int x1 = std::clamp(x + w, 0, r.width());
    const int y1 = std::clamp(y + h, 0, r.height());
    if (x1 > x0 && y1 > y0) r.fill_rect(x0, y0, x1 - x0, y1 - y0, 255);
}

// Parallel wires with random breaks, horizontal or vertical.
GrayRaster background(int side, Rng& rng) {
    GrayRaster r(side, side, 0);
    const int unit = std::max(2, side / 32);
    const int width = unit * (1 + static_cast<int>(rng.below(2)));
    const int pitch = width + unit * (2 + static_cast<int>(rng.below(3)));
    const bool horizontal = rng.below(2) == 0;
    for (int offset = static_cast<int>(rng.below(static_cast<std::uint64_t>(pitch))); offset + width <= side;
         offset += pitch) {
        int pos = 0;
        while (pos < side) {
            const int len = side / 4 + static_cast<int>(rng.below(static_cast<std::uint64_t>(side)));
            if (horizontal) {
                safe_fill(r, pos, offset, len, width);
            } else {
                safe_fill(r, offset, pos, width, len);
            }
            pos += len + unit * (1 + static_cast<int>(rng.below(4)));
        }
    }
    return r;
}

void motif(GrayRaster& r, int class_id, Rng& rng) {
    const int side = r.width();
    const int c = side / 2;
    const int unit = std::max(2, side / 32);
    const int box = side / 4;
    // Clear the centre so the motif is what distinguishes the class.
    r.fill_rect(c - box / 2, c - box / 2, box, box, 0);
    const int jitter = static_cast<int>(rng.below(static_cast<std::uint64_t>(unit)));
    switch (class_id) {
        case 0:  // line ends facing each other across a narrow gap
            safe_fill(r, c - box / 2, c - unit / 2, box / 2 - unit / 2 - jitter / 2, unit);
            safe_fill(r, c + unit / 2 + jitter / 2, c - unit / 2, box / 2, unit);
            break;
        case 1:  // tightly spaced parallel lines
            for (int i = -2; i <= 2; ++i) safe_fill(r, c - box / 2, c + i * (unit + 1) - jitter / 2, box, unit / 2 + 1);
            break;
        case 2:  // L-corner close to a straight wire
            safe_fill(r, c - box / 2, c - unit, box / 2 + unit, unit);
            safe_fill(r, c, c - unit, unit, box / 2);
            safe_fill(r, c + unit + 1 + jitter, c - box / 2, unit, box);
            break;
        default:  // dense via cluster
            for (int dy = -2; dy <= 2; ++dy) {
                for (int dx = -2; dx <= 2; ++dx) {
                    if (((dx + dy) & 1) == 0) safe_fill(r, c + dx * (unit + 1) - jitter, c + dy * (unit + 1), unit, unit);
                }
            }
            break;
    }
}

}  // namespace

std::vector<ClipRecord> make_synthetic_library(const SyntheticLibrarySpec& spec) {
    if (spec.side < 16) throw ContractViolation("synthetic clips must be at least 16 px");
    std::vector<ClipRecord> clips;
    std::uint64_t stream = 0;
    for (int i = 0; i < spec.non_hotspot; ++i) {
        Rng rng = Rng::substream(spec.seed, stream++);
        clips.emplace_back(fmt::format("nhs_{:04d}", i), background(spec.side, rng), false, std::nullopt);
    }
    for (int cls = 0; cls < 4; ++cls) {
        for (int i = 0; i < spec.hotspot_per_class; ++i) {
            Rng rng = Rng::substream(spec.seed, stream++);
            auto raster = background(spec.side, rng);
            motif(raster, cls, rng);
            clips.emplace_back(fmt::format("hs{}_{:04d}", cls, i), std::move(raster), true, cls);
        }
    }
    return clips;
}

}  // namespace hotspot
