#include "hotspot/clip.hpp"

#include <fmt/format.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "hotspot/errors.hpp"
#include "hotspot/geometry.hpp"
#include "hotspot/png_io.hpp"

namespace hotspot {

ClipRecord::ClipRecord(std::string id, GrayRaster raster, bool is_hotspot, std::optional<int> class_id)
    : id_(std::move(id)), raster_(std::move(raster)), is_hotspot_(is_hotspot), class_id_(class_id) {
    if (!raster_.square()) {
        throw ContractViolation(
            fmt::format("clip '{}' is not square ({}x{})", id_, raster_.width(), raster_.height()));
    }
    if (is_hotspot_ != class_id_.has_value()) {
        throw ContractViolation(fmt::format("clip '{}': class_id must be present iff is_hotspot", id_));
    }
    if (class_id_) check_class_id(*class_id_);
}

std::vector<ClipRecord> load_clip_library(const std::filesystem::path& dir) {
    const auto index_path = dir / "index.json";
    std::ifstream in(index_path);
    if (!in) throw IoError("missing clip index " + index_path.string());

    nlohmann::json index;
    try {
        in >> index;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(fmt::format("{}: malformed JSON: {}", index_path.string(), e.what()));
    }
    if (!index.is_array()) throw IoError(index_path.string() + ": expected a JSON array");

    std::vector<ClipRecord> clips;
    clips.reserve(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        const auto& entry = index[i];
        std::string id = fmt::format("#{}", i);
        try {
            if (!entry.is_object()) throw IoError("entry is not an object");
            id = entry.at("id").get<std::string>();
            const auto file = entry.at("file").get<std::string>();
            const bool is_hotspot = entry.at("is_hotspot").get<bool>();
            std::optional<int> class_id;
            if (entry.contains("class_id") && !entry["class_id"].is_null()) class_id = entry["class_id"].get<int>();
            if (is_hotspot && !class_id) throw IoError("hotspot entry lacks class_id");
            if (!is_hotspot && class_id) throw IoError("non-hotspot entry carries class_id");
            auto raster = read_gray_png(dir / file);
            if (!raster.square()) {
                throw IoError(fmt::format("raster is not square ({}x{})", raster.width(), raster.height()));
            }
            clips.emplace_back(id, std::move(raster), is_hotspot, class_id);
        } catch (const nlohmann::json::exception& e) {
            throw IoError(fmt::format("clip entry '{}': {}", id, e.what()));
        } catch (const std::exception& e) {
            throw IoError(fmt::format("clip entry '{}': {}", id, e.what()));
        }
    }
    return clips;
}

void save_clip_library(const std::filesystem::path& dir, const std::vector<ClipRecord>& clips) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    auto index = nlohmann::json::array();
    for (const auto& clip : clips) {
        const std::string file = clip.id() + ".png";
        write_gray_png(dir / file, clip.raster());
        nlohmann::json entry = {{"id", clip.id()}, {"file", file}, {"is_hotspot", clip.is_hotspot()}};
        if (clip.class_id()) entry["class_id"] = *clip.class_id();
        index.push_back(std::move(entry));
    }
    std::ofstream out(dir / "index.json");
    if (!out) throw IoError("cannot write " + (dir / "index.json").string());
    out << index.dump(2) << '\n';
}

GrayRaster resize_nearest(const GrayRaster& src, int target_side) {
    if (target_side <= 0) throw ContractViolation("target_side must be positive");
    if (src.width() == target_side && src.height() == target_side) return src;

    const auto map = [](int d, int from, int to) {
        return static_cast<int>((2LL * d + 1) * from / (2LL * to));
    };
    GrayRaster out(target_side, target_side);
    for (int y = 0; y < target_side; ++y) {
        const int sy = map(y, src.height(), target_side);
        for (int x = 0; x < target_side; ++x) {
            out.at(x, y) = src.at(map(x, src.width(), target_side), sy);
        }
    }
    return out;
}

ClipRecord resize_clip(const ClipRecord& clip, int target_side) {
    return ClipRecord(clip.id(), resize_nearest(clip.raster(), target_side), clip.is_hotspot(), clip.class_id());
}

}  // namespace hotspot
