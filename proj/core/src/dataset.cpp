#include "hotspot/dataset.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "hotspot/errors.hpp"
#include "hotspot/labels.hpp"
#include "hotspot/parallel.hpp"
#include "hotspot/png_io.hpp"

namespace hotspot::synth {

namespace {

constexpr std::uint64_t kSelectionStream = 0;
constexpr std::uint64_t kLayoutStream = 1;
constexpr std::uint64_t kWireStream = 2;

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

nlohmann::json rect_to_json(const PixelRect& r) { return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

PixelRect rect_from_json(const nlohmann::json& j) {
    return {j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(), j.at("h").get<int>()};
}

}  // namespace

std::string_view to_string(LayoutKind kind) {
    switch (kind) {
        case LayoutKind::Grid:
            return "grid";
        case LayoutKind::JitteredRows:
            return "jittered_rows";
        case LayoutKind::JitteredRowsWired:
            return "jittered_rows_wired";
    }
    return "grid";
}

LayoutKind layout_kind_from_string(std::string_view name) {
    if (name == "grid") return LayoutKind::Grid;
    if (name == "jittered_rows") return LayoutKind::JitteredRows;
    if (name == "jittered_rows_wired") return LayoutKind::JitteredRowsWired;
    throw ContractViolation(fmt::format("unknown layout kind '{}'", name));
}

int SynthConfig::box_side() const { return hotspot_box_side(clip_side, hotspot_box_fraction); }

void SynthConfig::validate() const {
    if (canvas_side < 1 || clip_side < 1) throw ContractViolation("canvas_side and clip_side must be positive");
    if (style.rows < 1 || style.cols < 1) throw ContractViolation("layout rows and cols must be positive");
    if (num_images < 0) throw ContractViolation("num_images must be >= 0");
    if (!(hotspot_fraction_target >= 0.0 && hotspot_fraction_target <= 1.0)) {
        throw ContractViolation("hotspot_fraction_target must lie in [0, 1]");
    }
    box_side();
    for (double w : class_weights) {
        if (!(w >= 0.0)) throw ContractViolation("class weights must be >= 0");
    }
    if (style.cols * clip_side > canvas_side) {
        throw ContractViolation(fmt::format("{} columns of {} px clips exceed the {} px canvas", style.cols, clip_side,
                                            canvas_side));
    }
    if (style.kind == LayoutKind::Grid) {
        if (style.rows * clip_side > canvas_side) {
            throw ContractViolation(fmt::format("{} rows of {} px clips exceed the {} px canvas", style.rows,
                                                clip_side, canvas_side));
        }
    } else {
        if (canvas_side / style.rows < clip_side) {
            throw ContractViolation(fmt::format("{} rows of {} px clips do not fit the {} px canvas", style.rows,
                                                clip_side, canvas_side));
        }
    }
    if (style.kind == LayoutKind::JitteredRowsWired && (style.wires.wire_width < 1 || style.wires.wires_per_pair < 0)) {
        throw ContractViolation("wire_width must be >= 1 and wires_per_row >= 0");
    }
}

bool is_preset(std::string_view name) {
    return name == "dataset1" || name == "dataset2" || name == "dataset3" || name == "dataset4";
}

SynthConfig preset(std::string_view name) {
    SynthConfig c;
    if (name == "dataset1") {
        c.style = {LayoutKind::Grid, 4, 4, {}};
        c.clip_side = 256;
        c.hotspot_fraction_target = 45006.0 / (45006.0 + 114994.0);
    } else if (name == "dataset2") {
        c.style = {LayoutKind::JitteredRows, 4, 2, {}};
        c.clip_side = 256;
        c.hotspot_fraction_target = 5060.0 / (5060.0 + 54940.0);
    } else if (name == "dataset3") {
        c.style = {LayoutKind::JitteredRowsWired, 4, 2, {}};
        c.clip_side = 256;
        c.hotspot_fraction_target = 24970.0 / (24970.0 + 55030.0);
    } else if (name == "dataset4") {
        c.style = {LayoutKind::Grid, 8, 8, {}};
        c.clip_side = 128;
        c.hotspot_fraction_target = 84609.0 / (84609.0 + 555391.0);
    } else {
        throw ContractViolation(fmt::format("unknown preset '{}'", name));
    }
    return c;
}

std::string image_id_for(std::size_t index) { return fmt::format("{:06d}", index); }

PreparedLibrary::PreparedLibrary(const std::vector<ClipRecord>& library, const SynthConfig& config) {
    config.validate();
    if (library.empty()) throw ContractViolation("clip library is empty");
    clips_.reserve(library.size());
    for (std::size_t i = 0; i < library.size(); ++i) {
        clips_.push_back(resize_clip(library[i], config.clip_side));
        const auto& clip = clips_.back();
        if (clip.is_hotspot()) {
            by_class_[static_cast<std::size_t>(*clip.class_id())].push_back(i);
        } else {
            non_hotspot_.push_back(i);
        }
    }
    bool usable_hotspot = false;
    for (int c = 0; c < kNumClasses; ++c) {
        if (!by_class_[c].empty() && config.class_weights[c] > 0.0) usable_hotspot = true;
    }
    if (config.hotspot_fraction_target > 0.0 && !usable_hotspot) {
        throw ContractViolation("hotspot fraction > 0 but the library has no hotspot clip with positive class weight");
    }
    if (config.hotspot_fraction_target < 1.0 && non_hotspot_.empty()) {
        throw ContractViolation("hotspot fraction < 1 but the library has no non-hotspot clip");
    }
}

ImagePlan plan_image(const SynthConfig& config, const PreparedLibrary& library, std::size_t index) {
    const Rng base = Rng::substream(config.seed, index);
    Rng selection = base.split(kSelectionStream);
    Rng layout = base.split(kLayoutStream);

    ImagePlan plan;
    plan.index = index;
    plan.image_id = image_id_for(index);
    const int slots = config.clips_per_image();
    plan.clip_indices.reserve(static_cast<std::size_t>(slots));

    double class_total = 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
        if (!library.hotspots_of_class(c).empty()) class_total += config.class_weights[c];
    }

    for (int s = 0; s < slots; ++s) {
        const bool hotspot = selection.uniform() < config.hotspot_fraction_target;
        if (!hotspot) {
            const auto& pool = library.non_hotspots();
            plan.clip_indices.push_back(pool[selection.below(pool.size())]);
            continue;
        }
        const double pick = selection.uniform() * class_total;
        double cumulative = 0.0;
        int chosen = -1;
        for (int c = 0; c < kNumClasses; ++c) {
            if (library.hotspots_of_class(c).empty() || config.class_weights[c] <= 0.0) continue;
            chosen = c;
            cumulative += config.class_weights[c];
            if (pick < cumulative) break;
        }
        const auto& pool = library.hotspots_of_class(chosen);
        plan.clip_indices.push_back(pool[selection.below(pool.size())]);
    }

    if (config.style.kind == LayoutKind::Grid) {
        plan.rects = grid_rects(config.style.rows, config.style.cols, config.clip_side);
    } else {
        plan.rects = jittered_rects(config.style.rows, config.style.cols, config.clip_side, config.canvas_side, layout);
    }
    return plan;
}

RenderedImage render_image(const SynthConfig& config, const PreparedLibrary& library, const ImagePlan& plan,
                           bool with_wires) {
    std::vector<ClipRecord> clips;
    clips.reserve(plan.clip_indices.size());
    for (auto idx : plan.clip_indices) clips.push_back(library.clips().at(idx));

    RenderedImage out{compose(clips, plan.rects, config.style.cols, config.canvas_side, config.box_side(), plan.image_id),
                      {}, 0};
    if (with_wires && config.style.kind == LayoutKind::JitteredRowsWired) {
        std::vector<BBox> boxes;
        boxes.reserve(out.composition.annotations.size());
        for (const auto& a : out.composition.annotations) boxes.push_back(a.bbox);
        Rng wire_rng = Rng::substream(config.seed, plan.index).split(kWireStream);
        auto routed = route_wires(std::move(out.composition.image), out.composition.placements, boxes,
                                  config.style.wires, wire_rng);
        out.composition.image = std::move(routed.image);
        out.wires = std::move(routed.wires);
        out.skipped_wires = routed.skipped;
    }
    return out;
}

DatasetCounts DatasetManifest::tally(const std::vector<ImageRecord>& images) {
    DatasetCounts counts;
    counts.images = images.size();
    for (const auto& img : images) {
        for (const auto& p : img.placements) {
            ++counts.clips;
            if (p.is_hotspot) {
                ++counts.hotspot_clips;
                ++counts.per_class.at(static_cast<std::size_t>(p.class_id.value()));
            } else {
                ++counts.non_hotspot_clips;
            }
        }
    }
    return counts;
}

nlohmann::json config_to_json(const SynthConfig& config) {
    return {{"canvas_side", config.canvas_side},
            {"clip_side", config.clip_side},
            {"layout",
             {{"kind", to_string(config.style.kind)},
              {"rows", config.style.rows},
              {"cols", config.style.cols},
              {"wire_width", config.style.wires.wire_width},
              {"wires_per_row", config.style.wires.wires_per_pair}}},
            {"num_images", config.num_images},
            {"hotspot_fraction_target", config.hotspot_fraction_target},
            {"seed", config.seed},
            {"hotspot_box_fraction", config.hotspot_box_fraction},
            {"class_weights", config.class_weights}};
}

SynthConfig config_from_json(const nlohmann::json& doc, SynthConfig base) {
    if (!doc.is_object()) throw ContractViolation("synth config must be a JSON object");
    try {
        if (doc.contains("preset")) base = preset(doc["preset"].get<std::string>());
        base.canvas_side = doc.value("canvas_side", base.canvas_side);
        base.clip_side = doc.value("clip_side", base.clip_side);
        if (doc.contains("layout")) {
            const auto& l = doc["layout"];
            if (l.contains("kind")) base.style.kind = layout_kind_from_string(l["kind"].get<std::string>());
            base.style.rows = l.value("rows", base.style.rows);
            base.style.cols = l.value("cols", base.style.cols);
            base.style.wires.wire_width = l.value("wire_width", base.style.wires.wire_width);
            base.style.wires.wires_per_pair = l.value("wires_per_row", base.style.wires.wires_per_pair);
        }
        base.num_images = doc.value("num_images", base.num_images);
        base.hotspot_fraction_target = doc.value("hotspot_fraction_target", base.hotspot_fraction_target);
        base.seed = doc.value("seed", base.seed);
        base.hotspot_box_fraction = doc.value("hotspot_box_fraction", base.hotspot_box_fraction);
        if (doc.contains("class_weights")) {
            base.class_weights = doc["class_weights"].get<std::array<double, kNumClasses>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ContractViolation(std::string("invalid synth config: ") + e.what());
    }
    return base;
}

nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
    auto images = nlohmann::json::array();
    for (const auto& img : manifest.images) {
        auto placements = nlohmann::json::array();
        for (const auto& p : img.placements) {
            placements.push_back({{"clip_id", p.clip_id},
                                  {"x", p.rect.x},
                                  {"y", p.rect.y},
                                  {"side", p.rect.w},
                                  {"row", p.row},
                                  {"is_hotspot", p.is_hotspot},
                                  {"class_id", p.class_id ? nlohmann::json(*p.class_id) : nlohmann::json(nullptr)}});
        }
        auto annotations = nlohmann::json::array();
        for (const auto& a : img.annotations) {
            annotations.push_back(
                {{"class_id", a.class_id}, {"cx", a.bbox.cx}, {"cy", a.bbox.cy}, {"w", a.bbox.w}, {"h", a.bbox.h}});
        }
        auto wires = nlohmann::json::array();
        for (const auto& w : img.wires) wires.push_back(rect_to_json(w));
        images.push_back({{"image_id", img.image_id},
                          {"placements", std::move(placements)},
                          {"annotations", std::move(annotations)},
                          {"wires", std::move(wires)},
                          {"skipped_wires", img.skipped_wires}});
    }
    const auto& c = manifest.counts;
    return {{"config", config_to_json(manifest.config)},
            {"images", std::move(images)},
            {"counts",
             {{"images", c.images},
              {"clips", c.clips},
              {"hotspot_clips", c.hotspot_clips},
              {"non_hotspot_clips", c.non_hotspot_clips},
              {"per_class", c.per_class}}}};
}

DatasetManifest manifest_from_json(const nlohmann::json& doc) {
    DatasetManifest m;
    try {
        m.config = config_from_json(doc.at("config"));
        for (const auto& img : doc.at("images")) {
            ImageRecord rec;
            rec.image_id = img.at("image_id").get<std::string>();
            for (const auto& p : img.at("placements")) {
                Placement pl;
                pl.clip_id = p.at("clip_id").get<std::string>();
                const int side = p.at("side").get<int>();
                pl.rect = {p.at("x").get<int>(), p.at("y").get<int>(), side, side};
                pl.row = p.value("row", 0);
                pl.is_hotspot = p.at("is_hotspot").get<bool>();
                if (!p.at("class_id").is_null()) pl.class_id = p["class_id"].get<int>();
                if (pl.is_hotspot != pl.class_id.has_value()) {
                    throw IoError("placement of '" + pl.clip_id + "' has inconsistent hotspot flag/class");
                }
                rec.placements.push_back(std::move(pl));
            }
            for (const auto& a : img.at("annotations")) {
                rec.annotations.push_back({rec.image_id, a.at("class_id").get<int>(),
                                           BBox{a.at("cx").get<double>(), a.at("cy").get<double>(),
                                                a.at("w").get<double>(), a.at("h").get<double>(), BoxUnits::Pixels}});
            }
            if (img.contains("wires")) {
                for (const auto& w : img["wires"]) rec.wires.push_back(rect_from_json(w));
            }
            rec.skipped_wires = img.value("skipped_wires", 0);
            m.images.push_back(std::move(rec));
        }
        const auto& c = doc.at("counts");
        m.counts.images = c.at("images").get<std::size_t>();
        m.counts.clips = c.at("clips").get<std::size_t>();
        m.counts.hotspot_clips = c.at("hotspot_clips").get<std::size_t>();
        m.counts.non_hotspot_clips = c.at("non_hotspot_clips").get<std::size_t>();
        m.counts.per_class = c.at("per_class").get<std::array<std::size_t, kNumClasses>>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    } catch (const ContractViolation& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
    if (DatasetManifest::tally(m.images) != m.counts) {
        throw IoError("manifest counts do not match its image records");
    }
    return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read manifest " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return manifest_from_json(doc);
}

DatasetManifest synthesize_dataset(const SynthConfig& config, const std::vector<ClipRecord>& library,
                                   const std::filesystem::path& out_dir, int workers) {
    const PreparedLibrary prepared(library, config);
    const auto images_dir = out_dir / "images";
    const auto labels_dir = out_dir / "labels";
    ensure_dir(images_dir);
    ensure_dir(labels_dir);

    std::vector<ImageRecord> records(static_cast<std::size_t>(config.num_images));
    parallel_for(records.size(), workers, [&](std::size_t i) {
        const auto plan = plan_image(config, prepared, i);
        auto rendered = render_image(config, prepared, plan);
        write_gray_png(images_dir / (plan.image_id + ".png"), rendered.composition.image);
        write_yolo_labels(rendered.composition.annotations, config.canvas_side, labels_dir / (plan.image_id + ".txt"));
        if (rendered.skipped_wires > 0) {
            spdlog::warn("image {}: {} wire(s) skipped", plan.image_id, rendered.skipped_wires);
        }
        records[i] = ImageRecord{plan.image_id, std::move(rendered.composition.placements),
                                 std::move(rendered.composition.annotations), std::move(rendered.wires),
                                 rendered.skipped_wires};
    });

    DatasetManifest manifest{config, std::move(records), {}};
    manifest.counts = DatasetManifest::tally(manifest.images);

    const auto path = out_dir / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << manifest_to_json(manifest).dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
    return manifest;
}

}  // namespace hotspot::synth
