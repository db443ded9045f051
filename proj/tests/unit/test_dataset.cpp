#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "hotspot/clip_gen.hpp"
#include "hotspot/dataset.hpp"
#include "hotspot/errors.hpp"
#include "hotspot/labels.hpp"
#include "oracles.hpp"

using namespace hotspot;
using namespace hotspot::synth;

namespace {

const std::vector<ClipRecord>& library() {
    static const auto lib = make_synthetic_library({256, 12, 3, 7});
    return lib;
}

}  // namespace

TEST(Presets, Shapes) {
    const auto d1 = preset("dataset1");
    EXPECT_EQ(d1.style.kind, LayoutKind::Grid);
    EXPECT_EQ(d1.clips_per_image(), 16);
    EXPECT_EQ(d1.box_side(), 64);
    EXPECT_DOUBLE_EQ(d1.hotspot_fraction_target, 45006.0 / 160000.0);

    const auto d2 = preset("dataset2");
    EXPECT_EQ(d2.style.kind, LayoutKind::JitteredRows);
    EXPECT_EQ(d2.clips_per_image(), 8);
    EXPECT_DOUBLE_EQ(d2.hotspot_fraction_target, 5060.0 / 60000.0);

    const auto d3 = preset("dataset3");
    EXPECT_EQ(d3.style.kind, LayoutKind::JitteredRowsWired);
    EXPECT_DOUBLE_EQ(d3.hotspot_fraction_target, 24970.0 / 80000.0);

    const auto d4 = preset("dataset4");
    EXPECT_EQ(d4.clips_per_image(), 64);
    EXPECT_EQ(d4.clip_side, 128);
    EXPECT_EQ(d4.box_side(), 32);
    EXPECT_DOUBLE_EQ(d4.hotspot_fraction_target, 84609.0 / 640000.0);

    EXPECT_THROW(preset("dataset5"), ContractViolation);
    EXPECT_TRUE(is_preset("dataset3"));
    EXPECT_FALSE(is_preset("grid"));
}

TEST(SynthConfig, Validation) {
    SynthConfig c;
    EXPECT_NO_THROW(c.validate());
    auto bad = c;
    bad.hotspot_fraction_target = 1.5;
    EXPECT_THROW(bad.validate(), ContractViolation);
    bad = c;
    bad.style.cols = 5;
    EXPECT_THROW(bad.validate(), ContractViolation);
    bad = c;
    bad.num_images = -1;
    EXPECT_THROW(bad.validate(), ContractViolation);
    bad = c;
    bad.class_weights[2] = -1.0;
    EXPECT_THROW(bad.validate(), ContractViolation);
    bad = preset("dataset3");
    bad.style.wires.wire_width = 0;
    EXPECT_THROW(bad.validate(), ContractViolation);
    EXPECT_THROW(layout_kind_from_string("spiral"), ContractViolation);
}

TEST(SynthConfig, JsonRoundTripAndPresetOverride) {
    auto c = preset("dataset3");
    c.num_images = 17;
    c.seed = 99;
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(c))), config_to_json(c));

    const auto merged = config_from_json(nlohmann::json{{"preset", "dataset4"}, {"num_images", 3}});
    EXPECT_EQ(merged.clip_side, 128);
    EXPECT_EQ(merged.num_images, 3);
    EXPECT_THROW(config_from_json(nlohmann::json{{"num_images", "many"}}), ContractViolation);
    EXPECT_THROW(config_from_json(nlohmann::json::array()), ContractViolation);
}

TEST(ImageIds, ZeroPadded) {
    EXPECT_EQ(image_id_for(0), "000000");
    EXPECT_EQ(image_id_for(123456), "123456");
}

TEST(PreparedLibrary, ResizesAndPartitions) {
    const PreparedLibrary lib(library(), preset("dataset4"));
    for (const auto& c : lib.clips()) ASSERT_EQ(c.side(), 128);
    EXPECT_EQ(lib.non_hotspots().size(), 12U);
    for (int c = 0; c < kNumClasses; ++c) EXPECT_EQ(lib.hotspots_of_class(c).size(), 3U);
}

TEST(PreparedLibrary, RejectsUnusableLibraries) {
    const auto config = preset("dataset1");
    EXPECT_THROW(PreparedLibrary({}, config), ContractViolation);
    std::vector<ClipRecord> only_nhs;
    for (const auto& c : library()) {
        if (!c.is_hotspot()) only_nhs.push_back(c);
    }
    EXPECT_THROW(PreparedLibrary(only_nhs, config), ContractViolation);
    auto no_hs = config;
    no_hs.hotspot_fraction_target = 0.0;
    EXPECT_NO_THROW(PreparedLibrary(only_nhs, no_hs));
}

TEST(Plan, GridGeometry) {
    const auto config = preset("dataset1");
    const PreparedLibrary lib(library(), config);
    std::size_t placements = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto plan = plan_image(config, lib, i);
        EXPECT_EQ(plan.image_id, image_id_for(i));
        EXPECT_EQ(plan.rects, grid_rects(4, 4, 256));
        placements += plan.clip_indices.size();
        const auto rendered = render_image(config, lib, plan);
        for (const auto& a : rendered.composition.annotations) {
            EXPECT_EQ(a.bbox.w, 64.0);
            EXPECT_EQ(static_cast<int>(a.bbox.cx - 128) % 256, 0);
        }
    }
    EXPECT_EQ(placements, 48U);
}

TEST(Plan, DeterministicPerIndex) {
    const auto config = preset("dataset2");
    const PreparedLibrary lib(library(), config);
    const auto a = plan_image(config, lib, 5);
    plan_image(config, lib, 4);
    const auto b = plan_image(config, lib, 5);
    EXPECT_EQ(a.clip_indices, b.clip_indices);
    EXPECT_EQ(a.rects, b.rects);
    auto other = config;
    other.seed = 1;
    EXPECT_NE(plan_image(other, lib, 5).rects, a.rects);
}

TEST(Plan, HotspotFractionTracksTarget) {
    const auto config = preset("dataset1");
    const PreparedLibrary lib(library(), config);
    std::size_t hotspots = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < 10000; ++i) {
        for (auto idx : plan_image(config, lib, i).clip_indices) {
            hotspots += lib.clips()[idx].is_hotspot();
            ++total;
        }
    }
    const double fraction = static_cast<double>(hotspots) / static_cast<double>(total);
    EXPECT_NEAR(fraction, 45006.0 / 160000.0, 0.01);
}

TEST(Render, WiresOnlyInWiredLayout) {
    const auto config = preset("dataset3");
    const PreparedLibrary lib(library(), config);
    const auto plan = plan_image(config, lib, 0);
    const auto wired = render_image(config, lib, plan);
    const auto bare = render_image(config, lib, plan, false);
    EXPECT_FALSE(wired.wires.empty());
    EXPECT_TRUE(bare.wires.empty());
    int differing = 0;
    for (std::size_t i = 0; i < wired.composition.image.pixels().size(); ++i) {
        differing += wired.composition.image.pixels()[i] != bare.composition.image.pixels()[i];
    }
    int wire_pixels = 0;
    for (const auto& w : wired.wires) wire_pixels += w.w * w.h;
    EXPECT_EQ(differing, wire_pixels);
}

TEST(Synthesize, WritesTreeAndIsWorkerIndependent) {
    auto config = preset("dataset2");
    config.num_images = 6;
    oracle::TempDir one("synth1");
    oracle::TempDir many("synth4");
    const auto m1 = synthesize_dataset(config, library(), one.path(), 1);
    const auto m4 = synthesize_dataset(config, library(), many.path(), 4);
    EXPECT_EQ(oracle::directory_hash(one.path()), oracle::directory_hash(many.path()));
    EXPECT_EQ(m1.counts, m4.counts);
    EXPECT_EQ(m1.counts.images, 6U);
    EXPECT_EQ(m1.counts.clips, 48U);
    EXPECT_EQ(m1.counts.hotspot_clips + m1.counts.non_hotspot_clips, 48U);

    for (const auto& rec : m1.images) {
        EXPECT_TRUE(std::filesystem::exists(one / ("images/" + rec.image_id + ".png")));
        const auto labels = read_yolo_labels(one / ("labels/" + rec.image_id + ".txt"));
        ASSERT_EQ(labels.size(), rec.annotations.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            // Six-decimal label precision.
            EXPECT_NEAR(labels[i].bbox.cx * 1024.0, rec.annotations[i].bbox.cx, 0.5e-6 * 1024.0 + 1e-9);
            EXPECT_EQ(labels[i].class_id, rec.annotations[i].class_id);
        }
    }

    const auto loaded = load_manifest(one / "manifest.json");
    EXPECT_EQ(manifest_to_json(loaded), manifest_to_json(m1));
    EXPECT_EQ(DatasetManifest::tally(loaded.images), m1.counts);
}

TEST(Manifest, RejectsInconsistentCounts) {
    auto config = preset("dataset1");
    config.num_images = 1;
    oracle::TempDir dir("manifest");
    const auto m = synthesize_dataset(config, library(), dir.path(), 1);
    auto doc = manifest_to_json(m);
    doc["counts"]["clips"] = 999;
    EXPECT_THROW(manifest_from_json(doc), IoError);
    EXPECT_THROW(load_manifest(dir / "missing.json"), IoError);
}
