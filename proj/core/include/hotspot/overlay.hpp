#pragma once

#include <array>
#include <cstdint>

#include "hotspot/features.hpp"
#include "hotspot/geometry.hpp"
#include "hotspot/raster.hpp"

namespace hotspot {

using Color = std::array<std::uint8_t, 3>;

inline constexpr Color kAnnotationColor{255, 0, 0};
inline constexpr Color kPredictionColor{0, 0, 255};

/// Grayscale image replicated into all three planes.
RgbRaster to_rgb(const GrayRaster& gray);

/// Pixel rectangle covered by a pixel-unit box: columns floor(left) ..
/// ceil(right) - 1, clipped to the image.
PixelRect box_pixels(const BBox& box, int width, int height);

/// One-pixel outline along the border of box_pixels(box).
void draw_box_outline(RgbRaster& image, const BBox& box, Color color);

/// Visual k-map audit: R and B carry the layout at half intensity, G the
/// quantized fused feature.
RgbRaster kmap_overlay(const GrayRaster& image, const features::FeatureParams& params);

}  // namespace hotspot
