#include "hotspot/labels.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "hotspot/errors.hpp"

namespace hotspot {

namespace {
// Six printed decimals can push an edge box past the unit square by 5e-7.
constexpr double kLabelSlack = 1e-6;
}  // namespace

std::string format_label_line(const Annotation& annotation, int canvas_side) {
    check_class_id(annotation.class_id);
    if (annotation.bbox.units != BoxUnits::Pixels) throw ContractViolation("label boxes must be in pixel units");
    annotation.bbox.validate();
    const auto& b = annotation.bbox;
    if (b.left() < 0.0 || b.top() < 0.0 || b.right() > canvas_side || b.bottom() > canvas_side) {
        throw ContractViolation(fmt::format("box ({}, {}, {}, {}) leaves the {} px canvas", b.cx, b.cy, b.w, b.h, canvas_side));
    }
    const auto n = b.normalized(static_cast<double>(canvas_side));
    return fmt::format("{} {:.6f} {:.6f} {:.6f} {:.6f}", annotation.class_id, n.cx, n.cy, n.w, n.h);
}

void write_yolo_labels(const std::vector<Annotation>& annotations, int canvas_side, const std::filesystem::path& path) {
    std::string text;
    for (const auto& a : annotations) {
        text += format_label_line(a, canvas_side);
        text += '\n';
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<LabelEntry> read_yolo_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<LabelEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        LabelEntry e;
        e.bbox.units = BoxUnits::Normalized;
        std::string extra;
        if (!(fields >> e.class_id >> e.bbox.cx >> e.bbox.cy >> e.bbox.w >> e.bbox.h) || (fields >> extra)) {
            throw IoError(fmt::format("{}:{}: expected 'class cx cy w h'", path.string(), line_no));
        }
        try {
            check_class_id(e.class_id);
            e.bbox.validate(kLabelSlack);
        } catch (const ContractViolation& err) {
            throw IoError(fmt::format("{}:{}: {}", path.string(), line_no, err.what()));
        }
        entries.push_back(e);
    }
    return entries;
}

}  // namespace hotspot
