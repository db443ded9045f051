#include "hotspot/png_io.hpp"

#include <png.h>

#include <cstring>
#include <string>
#include <vector>

#include "hotspot/errors.hpp"

namespace hotspot {

namespace {

struct PngImage {
    png_image image{};

    PngImage() {
        std::memset(&image, 0, sizeof(image));
        image.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&image); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;
};

std::string message(const png_image& image) { return std::string(image.message); }

std::vector<std::uint8_t> read_png(const std::filesystem::path& path, png_uint_32 wanted_format, bool want_color,
                                   int& width, int& height) {
    PngImage png;
    if (png_image_begin_read_from_file(&png.image, path.string().c_str()) == 0) {
        throw IoError("cannot read PNG " + path.string() + ": " + message(png.image));
    }
    const auto source_format = png.image.format;
    if ((source_format & PNG_FORMAT_FLAG_LINEAR) != 0) {
        throw IoError(path.string() + ": 16-bit PNG not supported, expected 8-bit");
    }
    if ((source_format & PNG_FORMAT_FLAG_ALPHA) != 0) {
        throw IoError(path.string() + ": PNG with alpha channel not supported");
    }
    const bool is_color = (source_format & PNG_FORMAT_FLAG_COLOR) != 0;
    if (is_color != want_color) {
        throw IoError(path.string() + (want_color ? ": expected RGB PNG" : ": expected grayscale PNG"));
    }
    png.image.format = wanted_format;
    width = static_cast<int>(png.image.width);
    height = static_cast<int>(png.image.height);
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.image));
    if (png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr) == 0) {
        throw IoError("cannot decode PNG " + path.string() + ": " + message(png.image));
    }
    return buffer;
}

void write_png(const std::filesystem::path& path, int width, int height, png_uint_32 format, const void* data) {
    PngImage png;
    png.image.width = static_cast<png_uint_32>(width);
    png.image.height = static_cast<png_uint_32>(height);
    png.image.format = format;
    if (png_image_write_to_file(&png.image, path.string().c_str(), 0, data, 0, nullptr) == 0) {
        throw IoError("cannot write PNG " + path.string() + ": " + message(png.image));
    }
}

}  // namespace

GrayRaster read_gray_png(const std::filesystem::path& path) {
    int width = 0;
    int height = 0;
    auto buffer = read_png(path, PNG_FORMAT_GRAY, false, width, height);
    return GrayRaster(width, height, std::move(buffer));
}

RgbRaster read_rgb_png(const std::filesystem::path& path) {
    int width = 0;
    int height = 0;
    const auto buffer = read_png(path, PNG_FORMAT_RGB, true, width, height);
    GrayRaster r(width, height);
    GrayRaster g(width, height);
    GrayRaster b(width, height);
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    for (std::size_t i = 0; i < n; ++i) {
        r.pixels()[i] = buffer[3 * i];
        g.pixels()[i] = buffer[3 * i + 1];
        b.pixels()[i] = buffer[3 * i + 2];
    }
    return RgbRaster(std::move(r), std::move(g), std::move(b));
}

void write_gray_png(const std::filesystem::path& path, const GrayRaster& raster) {
    write_png(path, raster.width(), raster.height(), PNG_FORMAT_GRAY, raster.pixels().data());
}

void write_rgb_png(const std::filesystem::path& path, const RgbRaster& raster) {
    const auto bytes = raster.interleaved();
    write_png(path, raster.width(), raster.height(), PNG_FORMAT_RGB, bytes.data());
}

}  // namespace hotspot
