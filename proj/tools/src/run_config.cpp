#include "run_config.hpp"

#include <fmt/format.h>

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "hotspot/errors.hpp"

namespace hotspot::app {

namespace {

void reject_unknown(const nlohmann::json& doc, std::string_view section, std::initializer_list<std::string_view> keys) {
    if (!doc.is_object()) throw ContractViolation(fmt::format("config section '{}' must be an object", section));
    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (auto k : keys) known = known || key == k;
        if (!known) throw ContractViolation(fmt::format("unknown config key '{}{}'", section.empty() ? "" : fmt::format("{}.", section), key));
    }
}

std::string_view mode_name(InspectMode mode) { return mode == InspectMode::KMap ? "kmap" : "annotations"; }

std::string_view denominator_name(eval::FprDenominator d) {
    return d == eval::FprDenominator::NonHotspotClips ? "non_hotspot_clips" : "total_clips";
}

template <typename T>
void read_into(const nlohmann::json& doc, const char* key, T& target) {
    if (doc.contains(key)) target = doc.at(key).get<T>();
}

void read_path(const nlohmann::json& doc, const char* key, std::filesystem::path& target) {
    if (doc.contains(key)) target = doc.at(key).get<std::string>();
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
    auto synth = synth::config_to_json(c.synth.config);
    synth["library"] = c.synth.library.string();
    return {
        {"workers", c.workers},
        {"log_level", c.log_level},
        {"out", c.out.string()},
        {"features",
         {{"threshold", c.features.threshold},
          {"small_tile", c.features.small_tile},
          {"tile_ratio", c.features.tile_ratio},
          {"weight_small", c.features.weight_small},
          {"weight_large", c.features.weight_large},
          {"pad", c.features.pad}}},
        {"augment", {{"input", c.augment.input.string()}, {"export_kmaps", c.augment.export_kmaps}}},
        {"synth", std::move(synth)},
        {"eval",
         {{"dataset", c.eval.dataset.string()},
          {"predictions", c.eval.predictions.string()},
          {"iou_threshold", c.eval.match.iou_threshold},
          {"class_aware", c.eval.match.class_aware},
          {"fpr_denominator", denominator_name(c.eval.fpr_denominator)}}},
        {"inspect",
         {{"mode", mode_name(c.inspect.mode)},
          {"input", c.inspect.input.string()},
          {"dataset", c.inspect.dataset.string()},
          {"predictions", c.inspect.predictions.string()}}},
    };
}

RunConfig merge_json(const nlohmann::json& doc, RunConfig c) {
    try {
        reject_unknown(doc, "", {"workers", "log_level", "out", "features", "augment", "synth", "eval", "inspect"});
        read_into(doc, "workers", c.workers);
        read_into(doc, "log_level", c.log_level);
        read_path(doc, "out", c.out);

        if (doc.contains("features")) {
            const auto& f = doc["features"];
            reject_unknown(f, "features", {"threshold", "small_tile", "tile_ratio", "weight_small", "weight_large", "pad"});
            read_into(f, "threshold", c.features.threshold);
            read_into(f, "small_tile", c.features.small_tile);
            read_into(f, "tile_ratio", c.features.tile_ratio);
            double ws = c.features.weight_small;
            double wl = c.features.weight_large;
            read_into(f, "weight_small", ws);
            read_into(f, "weight_large", wl);
            if (f.contains("weight_small") || f.contains("weight_large")) c.features.set_weights(ws, wl);
            read_into(f, "pad", c.features.pad);
        }
        if (doc.contains("augment")) {
            const auto& a = doc["augment"];
            reject_unknown(a, "augment", {"input", "export_kmaps"});
            read_path(a, "input", c.augment.input);
            read_into(a, "export_kmaps", c.augment.export_kmaps);
        }
        if (doc.contains("synth")) {
            auto s = doc["synth"];
            reject_unknown(s, "synth",
                           {"library", "preset", "canvas_side", "clip_side", "layout", "num_images",
                            "hotspot_fraction_target", "seed", "hotspot_box_fraction", "class_weights"});
            if (s.contains("layout")) {
                reject_unknown(s["layout"], "synth.layout", {"kind", "rows", "cols", "wire_width", "wires_per_row"});
            }
            read_path(s, "library", c.synth.library);
            s.erase("library");
            c.synth.config = synth::config_from_json(s, c.synth.config);
        }
        if (doc.contains("eval")) {
            const auto& e = doc["eval"];
            reject_unknown(e, "eval", {"dataset", "predictions", "iou_threshold", "class_aware", "fpr_denominator"});
            read_path(e, "dataset", c.eval.dataset);
            read_path(e, "predictions", c.eval.predictions);
            read_into(e, "iou_threshold", c.eval.match.iou_threshold);
            read_into(e, "class_aware", c.eval.match.class_aware);
            if (e.contains("fpr_denominator")) {
                const auto name = e["fpr_denominator"].get<std::string>();
                if (name == "non_hotspot_clips") {
                    c.eval.fpr_denominator = eval::FprDenominator::NonHotspotClips;
                } else if (name == "total_clips") {
                    c.eval.fpr_denominator = eval::FprDenominator::TotalClips;
                } else {
                    throw ContractViolation("eval.fpr_denominator must be 'non_hotspot_clips' or 'total_clips'");
                }
            }
        }
        if (doc.contains("inspect")) {
            const auto& i = doc["inspect"];
            reject_unknown(i, "inspect", {"mode", "input", "dataset", "predictions"});
            if (i.contains("mode")) {
                const auto name = i["mode"].get<std::string>();
                if (name == "kmap") {
                    c.inspect.mode = InspectMode::KMap;
                } else if (name == "annotations") {
                    c.inspect.mode = InspectMode::Annotations;
                } else {
                    throw ContractViolation("inspect.mode must be 'kmap' or 'annotations'");
                }
            }
            read_path(i, "input", c.inspect.input);
            read_path(i, "dataset", c.inspect.dataset);
            read_path(i, "predictions", c.inspect.predictions);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ContractViolation(fmt::format("invalid config: {}", e.what()));
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ContractViolation(fmt::format("config {} is not valid JSON: {}", path.string(), e.what()));
    }
    return merge_json(doc, std::move(base));
}

}  // namespace hotspot::app
