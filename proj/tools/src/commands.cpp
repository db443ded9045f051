#include "commands.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <set>

#include "hotspot/clip.hpp"
#include "hotspot/errors.hpp"
#include "hotspot/eval.hpp"
#include "hotspot/kmap_io.hpp"
#include "hotspot/overlay.hpp"
#include "hotspot/parallel.hpp"
#include "hotspot/png_io.hpp"

namespace hotspot::app {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool has_png_extension(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png";
}

void require_setting(const fs::path& p, const char* key) {
    if (p.empty()) throw ContractViolation(fmt::format("config key '{}' is required", key));
}

void require_exists(const fs::path& p, const char* key) {
    require_setting(p, key);
    if (!fs::exists(p)) throw IoError(fmt::format("{} does not exist: {}", key, p.string()));
}

void prepare_out(const fs::path& out) {
    require_setting(out, "out");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw IoError(fmt::format("cannot create output directory {}", out.string()));
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f << text;
    if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace

nlohmann::json AugmentSummary::to_json() const {
    return {{"images", images},
            {"workers", workers},
            {"wall_ms", wall_ms},
            {"mean_clip_ms", mean_clip_ms ? nlohmann::json(*mean_clip_ms) : nlohmann::json(nullptr)}};
}

std::vector<fs::path> list_pngs(const fs::path& input) {
    if (fs::is_regular_file(input)) return {input};
    if (!fs::is_directory(input)) throw IoError("not a file or directory: " + input.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_regular_file() && has_png_extension(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

AugmentSummary cmd_augment(const RunConfig& config, std::ostream& out) {
    config.features.validate();
    require_exists(config.augment.input, "augment.input");
    const auto inputs = list_pngs(config.augment.input);
    prepare_out(config.out);

    AugmentSummary summary;
    summary.images = inputs.size();
    summary.workers = resolve_workers(config.workers);
    std::vector<double> compute_ms(inputs.size(), 0.0);

    const auto start = Clock::now();
    parallel_for(inputs.size(), summary.workers, [&](std::size_t i) {
        const auto& path = inputs[i];
        const auto image = read_gray_png(path);
        const auto t0 = Clock::now();
        const auto result = [&] {
            try {
                return features::augment_image_detailed(image, config.features);
            } catch (const TileNumericalError& e) {
                throw TileNumericalError(fmt::format("{}: {}", path.filename().string(), e.what()), e.tile_x(),
                                         e.tile_y());
            }
        }();
        compute_ms[i] = elapsed_ms(t0);

        const auto stem = path.stem().string();
        write_rgb_png(config.out / (stem + ".png"), result.image);
        if (config.augment.export_kmaps) {
            features::write_kmap_json(config.out / fmt::format("{}.k{}.json", stem, result.small.tile_side),
                                      result.small);
            features::write_kmap_json(config.out / fmt::format("{}.k{}.json", stem, result.large.tile_side),
                                      result.large);
            features::write_fused_f32(config.out / (stem + ".fused.f32"), result.fused);
        }
        spdlog::debug("augmented {} in {:.3f} ms", path.string(), compute_ms[i]);
    });
    summary.wall_ms = elapsed_ms(start);
    if (!inputs.empty()) {
        double total = 0.0;
        for (double ms : compute_ms) total += ms;
        summary.mean_clip_ms = total / static_cast<double>(inputs.size());
    }
    out << summary.to_json().dump() << '\n';
    return summary;
}

synth::DatasetManifest cmd_synth(const RunConfig& config, std::ostream& out) {
    config.synth.config.validate();
    require_exists(config.synth.library, "synth.library");
    const auto library = load_clip_library(config.synth.library);
    prepare_out(config.out);

    const auto start = Clock::now();
    auto manifest = synth::synthesize_dataset(config.synth.config, library, config.out, config.workers);
    const auto& c = manifest.counts;
    spdlog::info("synthesized {} images in {:.1f} ms", c.images, elapsed_ms(start));
    out << nlohmann::json{{"images", c.images},
                          {"clips", c.clips},
                          {"hotspot_clips", c.hotspot_clips},
                          {"non_hotspot_clips", c.non_hotspot_clips},
                          {"per_class", c.per_class},
                          {"out", config.out.string()}}
               .dump()
        << '\n';
    return manifest;
}

nlohmann::json cmd_eval(const RunConfig& config, std::ostream& out) {
    const auto& opts = config.eval;
    if (!(opts.match.iou_threshold > 0.0 && opts.match.iou_threshold <= 1.0)) {
        throw ContractViolation("eval.iou_threshold must be in (0, 1]");
    }
    require_exists(opts.dataset, "eval.dataset");
    require_exists(opts.predictions, "eval.predictions");
    const auto truth = eval::load_ground_truth(opts.dataset);
    const auto predictions = eval::read_predictions(opts.predictions);

    const std::set<std::string> known(truth.image_ids.begin(), truth.image_ids.end());
    const auto unknown = eval::unknown_images(predictions, known);
    if (!unknown.empty()) {
        throw ContractViolation(fmt::format("predictions reference unknown image ids: {}", fmt::join(unknown, ", ")));
    }
    prepare_out(config.out);

    const auto matching = eval::match_detections(predictions, truth.annotations, opts.match);
    const std::size_t negatives =
        opts.fpr_denominator == eval::FprDenominator::NonHotspotClips ? truth.non_hotspot_clips : truth.total_clips;
    const auto report = eval::compute_metrics(matching, negatives);
    auto doc = eval::report_to_json(report, matching, predictions, truth, opts.fpr_denominator);
    write_text(config.out / "report.json", doc.dump(2) + "\n");
    out << eval::format_report_table(report);
    return doc;
}

std::vector<fs::path> cmd_inspect(const RunConfig& config, std::ostream& out) {
    std::vector<fs::path> written;
    const auto& opts = config.inspect;
    if (opts.mode == InspectMode::KMap) {
        config.features.validate();
        require_exists(opts.input, "inspect.input");
        const auto inputs = list_pngs(opts.input);
        prepare_out(config.out);
        written.resize(inputs.size());
        parallel_for(inputs.size(), config.workers, [&](std::size_t i) {
            const auto image = read_gray_png(inputs[i]);
            written[i] = config.out / (inputs[i].stem().string() + ".kmap.png");
            write_rgb_png(written[i], kmap_overlay(image, config.features));
        });
    } else {
        require_exists(opts.dataset, "inspect.dataset");
        const auto manifest = synth::load_manifest(opts.dataset / "manifest.json");
        std::vector<eval::Prediction> predictions;
        if (!opts.predictions.empty()) {
            require_exists(opts.predictions, "inspect.predictions");
            predictions = eval::read_predictions(opts.predictions);
        }
        prepare_out(config.out);
        const double canvas = manifest.config.canvas_side;
        written.resize(manifest.images.size());
        parallel_for(manifest.images.size(), config.workers, [&](std::size_t i) {
            const auto& rec = manifest.images[i];
            auto rgb = to_rgb(read_gray_png(opts.dataset / "images" / (rec.image_id + ".png")));
            for (const auto& a : rec.annotations) draw_box_outline(rgb, a.bbox, kAnnotationColor);
            for (const auto& p : predictions) {
                if (p.image_id == rec.image_id) draw_box_outline(rgb, p.bbox.to_pixels(canvas), kPredictionColor);
            }
            written[i] = config.out / (rec.image_id + ".annotations.png");
            write_rgb_png(written[i], rgb);
        });
    }
    out << nlohmann::json{{"overlays", written.size()}, {"out", config.out.string()}}.dump() << '\n';
    return written;
}

}  // namespace hotspot::app
