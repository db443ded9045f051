#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hotspot/clip.hpp"
#include "hotspot/geometry.hpp"
#include "hotspot/mosaic.hpp"

namespace hotspot::synth {

enum class LayoutKind { Grid, JitteredRows, JitteredRowsWired };

std::string_view to_string(LayoutKind kind);
LayoutKind layout_kind_from_string(std::string_view name);

struct LayoutStyle {
    LayoutKind kind = LayoutKind::Grid;
    int rows = 4;
    int cols = 4;
    WireParams wires;  ///< used by JitteredRowsWired only
};

struct SynthConfig {
    int canvas_side = 1024;
    int clip_side = 256;
    LayoutStyle style;
    int num_images = 10;
    double hotspot_fraction_target = 0.28;
    std::uint64_t seed = 0;
    double hotspot_box_fraction = 0.25;
    /// Relative sampling weight of each hotspot class; classes absent from
    /// the library are ignored.
    std::array<double, kNumClasses> class_weights{1.0, 1.0, 1.0, 1.0};

    int clips_per_image() const noexcept { return style.rows * style.cols; }
    int box_side() const;
    void validate() const;
};

/// dataset1: Grid 4x4 of 256 px clips; dataset2: JitteredRows 4x2, 256 px;
/// dataset3: JitteredRowsWired 4x2, 256 px; dataset4: Grid 8x8, 128 px.
/// The hotspot fraction is the training split's HS / (HS + NHS).
SynthConfig preset(std::string_view name);
bool is_preset(std::string_view name);

/// Zero-padded six-digit decimal index.
std::string image_id_for(std::size_t index);

/// Which library clips image `index` uses and where they go.
struct ImagePlan {
    std::size_t index = 0;
    std::string image_id;
    std::vector<std::size_t> clip_indices;
    std::vector<PixelRect> rects;
};

/// Library clips prepared for a configuration: resized to clip_side and
/// partitioned into selection pools.
class PreparedLibrary {
public:
    PreparedLibrary(const std::vector<ClipRecord>& library, const SynthConfig& config);

    const std::vector<ClipRecord>& clips() const noexcept { return clips_; }
    const std::vector<std::size_t>& non_hotspots() const noexcept { return non_hotspot_; }
    const std::vector<std::size_t>& hotspots_of_class(int c) const { return by_class_.at(static_cast<std::size_t>(c)); }

private:
    std::vector<ClipRecord> clips_;
    std::vector<std::size_t> non_hotspot_;
    std::array<std::vector<std::size_t>, kNumClasses> by_class_;
};

/// Clip selection and layout for image `index`. Each slot is a hotspot with
/// probability hotspot_fraction_target; a hotspot slot picks a class by
/// class_weights over the classes present, then a clip uniformly within it;
/// other slots pick uniformly among non-hotspot clips. Selection and layout
/// use substreams 0 and 1 of Rng::substream(seed, index).
ImagePlan plan_image(const SynthConfig& config, const PreparedLibrary& library, std::size_t index);

struct RenderedImage {
    Composition composition;
    std::vector<PixelRect> wires;
    int skipped_wires = 0;
};

/// Pastes the planned clips; for JitteredRowsWired also routes wires (from
/// substream 2) unless `with_wires` is false.
RenderedImage render_image(const SynthConfig& config, const PreparedLibrary& library, const ImagePlan& plan,
                           bool with_wires = true);

struct ImageRecord {
    std::string image_id;
    std::vector<Placement> placements;
    std::vector<Annotation> annotations;  ///< pixel units
    std::vector<PixelRect> wires;
    int skipped_wires = 0;
};

struct DatasetCounts {
    std::size_t images = 0;
    std::size_t clips = 0;
    std::size_t hotspot_clips = 0;
    std::size_t non_hotspot_clips = 0;
    std::array<std::size_t, kNumClasses> per_class{};

    bool operator==(const DatasetCounts&) const = default;
};

struct DatasetManifest {
    SynthConfig config;
    std::vector<ImageRecord> images;
    DatasetCounts counts;

    /// Recomputes `counts` from `images`.
    static DatasetCounts tally(const std::vector<ImageRecord>& images);
};

nlohmann::json config_to_json(const SynthConfig& config);
SynthConfig config_from_json(const nlohmann::json& doc, SynthConfig base = {});

nlohmann::json manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& doc);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Writes images/{id}.png, labels/{id}.txt and manifest.json under out_dir.
/// Output bytes depend only on (config, library), never on `workers`.
DatasetManifest synthesize_dataset(const SynthConfig& config, const std::vector<ClipRecord>& library,
                                   const std::filesystem::path& out_dir, int workers = 0);

}  // namespace hotspot::synth
