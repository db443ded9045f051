#include "hotspot/raster.hpp"

#include <algorithm>
#include <string>

#include "hotspot/errors.hpp"

namespace hotspot {

namespace {

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw ContractViolation("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                                std::to_string(height));
    }
}

}  // namespace

GrayRaster::GrayRaster(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayRaster::GrayRaster(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw ContractViolation("raster data length " + std::to_string(data_.size()) + " does not match " +
                                std::to_string(width) + "x" + std::to_string(height));
    }
}

std::span<const std::uint8_t> GrayRaster::row(int y) const {
    return std::span<const std::uint8_t>(data_).subspan(index(0, y), static_cast<std::size_t>(width_));
}

GrayRaster GrayRaster::crop(int x0, int y0, int w, int h) const {
    if (x0 < 0 || y0 < 0 || w <= 0 || h <= 0 || x0 + w > width_ || y0 + h > height_) {
        throw ContractViolation("crop window out of bounds");
    }
    GrayRaster out(w, h);
    for (int y = 0; y < h; ++y) {
        const auto src = row(y0 + y).subspan(static_cast<std::size_t>(x0), static_cast<std::size_t>(w));
        std::copy(src.begin(), src.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(out.index(0, y)));
    }
    return out;
}

void GrayRaster::paste(const GrayRaster& src, int x0, int y0) {
    if (x0 < 0 || y0 < 0 || x0 + src.width() > width_ || y0 + src.height() > height_) {
        throw ContractViolation("paste target out of bounds");
    }
    for (int y = 0; y < src.height(); ++y) {
        const auto line = src.row(y);
        std::copy(line.begin(), line.end(), data_.begin() + static_cast<std::ptrdiff_t>(index(x0, y0 + y)));
    }
}

void GrayRaster::fill_rect(int x0, int y0, int w, int h, std::uint8_t value) {
    if (x0 < 0 || y0 < 0 || w < 0 || h < 0 || x0 + w > width_ || y0 + h > height_) {
        throw ContractViolation("fill_rect out of bounds");
    }
    for (int y = y0; y < y0 + h; ++y) {
        std::fill_n(data_.begin() + static_cast<std::ptrdiff_t>(index(x0, y)), w, value);
    }
}

RgbRaster::RgbRaster(int width, int height) : red_(width, height), green_(width, height), blue_(width, height) {}

RgbRaster::RgbRaster(GrayRaster red, GrayRaster green, GrayRaster blue)
    : red_(std::move(red)), green_(std::move(green)), blue_(std::move(blue)) {
    if (red_.width() != green_.width() || red_.width() != blue_.width() || red_.height() != green_.height() ||
        red_.height() != blue_.height()) {
        throw ContractViolation("RGB planes must share dimensions");
    }
}

std::vector<std::uint8_t> RgbRaster::interleaved() const {
    const auto r = red_.pixels();
    const auto g = green_.pixels();
    const auto b = blue_.pixels();
    std::vector<std::uint8_t> out(r.size() * 3);
    for (std::size_t i = 0; i < r.size(); ++i) {
        out[3 * i] = r[i];
        out[3 * i + 1] = g[i];
        out[3 * i + 2] = b[i];
    }
    return out;
}

}  // namespace hotspot
