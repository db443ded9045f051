#include <gtest/gtest.h>

#include "hotspot/features.hpp"
#include "hotspot/overlay.hpp"

using namespace hotspot;

TEST(Overlay, ToRgbReplicates) {
    GrayRaster g(3, 2, {0, 1, 2, 3, 4, 5});
    const auto rgb = to_rgb(g);
    EXPECT_EQ(rgb.red(), g);
    EXPECT_EQ(rgb.green(), g);
    EXPECT_EQ(rgb.blue(), g);
}

TEST(Overlay, BoxPixels) {
    EXPECT_EQ(box_pixels(BBox{128, 128, 64, 64}, 1024, 1024), (PixelRect{96, 96, 64, 64}));
    EXPECT_EQ(box_pixels(BBox{10.5, 10.5, 3, 3}, 100, 100), (PixelRect{9, 9, 3, 3}));
    EXPECT_EQ(box_pixels(BBox{10.5, 10.5, 4, 4}, 100, 100), (PixelRect{8, 8, 5, 5}));
    EXPECT_EQ(box_pixels(BBox{2, 2, 10, 10}, 5, 5), (PixelRect{0, 0, 5, 5}));
}

TEST(Overlay, OutlineTouchesBorderOnly) {
    RgbRaster img(40, 40);
    draw_box_outline(img, BBox{20, 20, 10, 10}, kAnnotationColor);
    int red = 0;
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 40; ++x) {
            const bool border = (x == 15 || x == 24 || y == 15 || y == 24) && x >= 15 && x <= 24 && y >= 15 && y <= 24;
            ASSERT_EQ(img.red().at(x, y), border ? 255 : 0) << x << "," << y;
            ASSERT_EQ(img.blue().at(x, y), 0);
            red += border;
        }
    }
    EXPECT_EQ(red, 36);
}

TEST(Overlay, KMapOverlayOfZeroImageIsUniformBlack) {
    const auto rgb = kmap_overlay(GrayRaster(256, 256, 0), features::FeatureParams{});
    for (const auto* plane : {&rgb.red(), &rgb.green(), &rgb.blue()}) {
        for (auto v : plane->pixels()) ASSERT_EQ(v, 0);
    }
}

TEST(Overlay, KMapOverlayHalvesLayout) {
    const auto rgb = kmap_overlay(GrayRaster(256, 256, 255), features::FeatureParams{});
    EXPECT_EQ(rgb.red().at(0, 0), 127);
    EXPECT_EQ(rgb.blue().at(255, 255), 127);
    EXPECT_EQ(rgb.green().at(3, 3), 0);
}
