#pragma once

#include <string>

namespace hotspot {

inline constexpr int kNumClasses = 4;

enum class BoxUnits { Pixels, Normalized };

/// Center/extent box. Normalized boxes must lie inside [0,1]^2 (1e-9 slack).
struct BBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
    BoxUnits units = BoxUnits::Pixels;

    double left() const noexcept { return cx - w / 2.0; }
    double right() const noexcept { return cx + w / 2.0; }
    double top() const noexcept { return cy - h / 2.0; }
    double bottom() const noexcept { return cy + h / 2.0; }
    double area() const noexcept { return w * h; }

    /// Throws ContractViolation when the box breaks its invariants. `slack`
    /// is the tolerance on the unit-square bounds of normalized boxes.
    void validate(double slack = 1e-9) const;

    /// Pixel box -> normalized box for a square canvas of side `canvas_side`.
    BBox normalized(double canvas_side) const;
    BBox to_pixels(double canvas_side) const;

    bool operator==(const BBox&) const = default;
};

/// Integer pixel rectangle [x, x+w) x [y, y+h).
struct PixelRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const noexcept { return x + w; }
    int bottom() const noexcept { return y + h; }
    bool intersects(const PixelRect& o) const noexcept {
        return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom();
    }
    bool contains(int px, int py) const noexcept { return px >= x && px < right() && py >= y && py < bottom(); }

    bool operator==(const PixelRect&) const = default;
};

struct Annotation {
    std::string image_id;
    int class_id = 0;
    BBox bbox;

    void validate() const;
};

void check_class_id(int class_id);

}  // namespace hotspot
