#include "hotspot/kmap_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "hotspot/errors.hpp"

namespace hotspot::features {

namespace {

constexpr std::array<char, 8> kMagic = {'K', 'M', 'A', 'P', 'F', '3', '2', '\0'};

void put_u32(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> bytes = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                       static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(bytes.data(), bytes.size());
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), b.size());
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_kmap_json(const std::filesystem::path& path, const KMap& map) {
    map.validate();
    const nlohmann::json doc = {
        {"tile_side", map.tile_side}, {"tiles_x", map.tiles_x}, {"tiles_y", map.tiles_y}, {"k", map.k_values}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump() << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

KMap read_kmap_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        const auto doc = nlohmann::json::parse(in);
        KMap map;
        map.tile_side = doc.at("tile_side").get<int>();
        map.tiles_x = doc.at("tiles_x").get<int>();
        map.tiles_y = doc.at("tiles_y").get<int>();
        map.k_values = doc.at("k").get<std::vector<int>>();
        map.validate();
        return map;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    } catch (const ContractViolation& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_fused_f32(const std::filesystem::path& path, const FusedMap& map) {
    if (map.values.size() != static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height)) {
        throw ContractViolation("fused map value count does not match its dimensions");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, static_cast<std::uint32_t>(map.width));
    put_u32(out, static_cast<std::uint32_t>(map.height));
    for (float v : map.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
    if (!out) throw IoError("write failed: " + path.string());
}

FusedMap read_fused_f32(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw IoError(path.string() + ": bad magic, not a KMAPF32 file");
    FusedMap map;
    map.width = static_cast<int>(get_u32(in));
    map.height = static_cast<int>(get_u32(in));
    if (!in || map.width <= 0 || map.height <= 0) throw IoError(path.string() + ": bad header");
    map.values.resize(static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height));
    for (auto& v : map.values) v = std::bit_cast<float>(get_u32(in));
    if (!in) throw IoError(path.string() + ": truncated data");
    return map;
}

}  // namespace hotspot::features
