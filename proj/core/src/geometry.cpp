#include "hotspot/geometry.hpp"

#include <fmt/format.h>

#include "hotspot/errors.hpp"

namespace hotspot {

void BBox::validate(double slack) const {
    if (!(w > 0.0) || !(h > 0.0)) {
        throw ContractViolation(fmt::format("box extents must be positive, got w={} h={}", w, h));
    }
    if (units == BoxUnits::Normalized) {
        if (left() < -slack || right() > 1.0 + slack || top() < -slack ||
            bottom() > 1.0 + slack) {
            throw ContractViolation(fmt::format("normalized box ({}, {}, {}, {}) leaves the unit square", cx, cy, w, h));
        }
    }
}

BBox BBox::normalized(double canvas_side) const {
    if (units == BoxUnits::Normalized) return *this;
    return BBox{cx / canvas_side, cy / canvas_side, w / canvas_side, h / canvas_side, BoxUnits::Normalized};
}

BBox BBox::to_pixels(double canvas_side) const {
    if (units == BoxUnits::Pixels) return *this;
    return BBox{cx * canvas_side, cy * canvas_side, w * canvas_side, h * canvas_side, BoxUnits::Pixels};
}

void check_class_id(int class_id) {
    if (class_id < 0 || class_id >= kNumClasses) {
        throw ContractViolation(fmt::format("class_id {} outside 0..{}", class_id, kNumClasses - 1));
    }
}

void Annotation::validate() const {
    check_class_id(class_id);
    bbox.validate();
}

}  // namespace hotspot
