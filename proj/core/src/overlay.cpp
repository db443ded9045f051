#include "hotspot/overlay.hpp"

#include <algorithm>
#include <cmath>

namespace hotspot {

RgbRaster to_rgb(const GrayRaster& gray) { return RgbRaster(gray, gray, gray); }

PixelRect box_pixels(const BBox& box, int width, int height) {
    const int x0 = std::clamp(static_cast<int>(std::floor(box.left())), 0, width);
    const int y0 = std::clamp(static_cast<int>(std::floor(box.top())), 0, height);
    const int x1 = std::clamp(static_cast<int>(std::ceil(box.right())), 0, width);
    const int y1 = std::clamp(static_cast<int>(std::ceil(box.bottom())), 0, height);
    return {x0, y0, x1 - x0, y1 - y0};
}

void draw_box_outline(RgbRaster& image, const BBox& box, Color color) {
    const auto r = box_pixels(box, image.width(), image.height());
    if (r.w <= 0 || r.h <= 0) return;
    const auto put = [&](int x, int y) {
        image.red().at(x, y) = color[0];
        image.green().at(x, y) = color[1];
        image.blue().at(x, y) = color[2];
    };
    for (int x = r.x; x < r.right(); ++x) {
        put(x, r.y);
        put(x, r.bottom() - 1);
    }
    for (int y = r.y; y < r.bottom(); ++y) {
        put(r.x, y);
        put(r.right() - 1, y);
    }
}

RgbRaster kmap_overlay(const GrayRaster& image, const features::FeatureParams& params) {
    const auto augmented = features::augment_image(image, params);
    GrayRaster half(image.width(), image.height());
    std::transform(image.pixels().begin(), image.pixels().end(), half.pixels().begin(),
                   [](std::uint8_t v) { return static_cast<std::uint8_t>(v / 2); });
    return RgbRaster(half, augmented.green(), half);
}

}  // namespace hotspot
