#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hotspot {

/// Row-major 8-bit intensity grid. Layout convention: foreground (pattern) is
/// 255, background is 0.
class GrayRaster {
public:
    GrayRaster(int width, int height, std::uint8_t fill = 0);
    GrayRaster(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool square() const noexcept { return width_ == height_; }

    std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return data_[index(x, y)]; }

    std::span<const std::uint8_t> pixels() const noexcept { return data_; }
    std::span<std::uint8_t> pixels() noexcept { return data_; }
    std::span<const std::uint8_t> row(int y) const;

    /// Copies the w x h window whose top-left corner is (x0, y0).
    GrayRaster crop(int x0, int y0, int w, int h) const;
    /// Pastes `src` with its top-left corner at (x0, y0); src must fit.
    void paste(const GrayRaster& src, int x0, int y0);
    void fill_rect(int x0, int y0, int w, int h, std::uint8_t value);

    bool operator==(const GrayRaster&) const = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

/// Three equally-sized planes.
class RgbRaster {
public:
    RgbRaster(int width, int height);
    RgbRaster(GrayRaster red, GrayRaster green, GrayRaster blue);

    int width() const noexcept { return red_.width(); }
    int height() const noexcept { return red_.height(); }

    const GrayRaster& red() const noexcept { return red_; }
    const GrayRaster& green() const noexcept { return green_; }
    const GrayRaster& blue() const noexcept { return blue_; }
    GrayRaster& red() noexcept { return red_; }
    GrayRaster& green() noexcept { return green_; }
    GrayRaster& blue() noexcept { return blue_; }

    /// Interleaved RGBRGB... bytes, row-major.
    std::vector<std::uint8_t> interleaved() const;

    bool operator==(const RgbRaster&) const = default;

private:
    GrayRaster red_;
    GrayRaster green_;
    GrayRaster blue_;
};

}  // namespace hotspot
