#include "hotspot/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>

#include "hotspot/dataset.hpp"
#include "hotspot/errors.hpp"
#include "hotspot/labels.hpp"

namespace hotspot::eval {

namespace {

// Predictions may sit on the canvas edge after rounding.
constexpr double kPredictionSlack = 1e-6;

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json metrics_to_json(const Metrics& m) {
    return {{"tp", m.tp},
            {"fp", m.fp},
            {"fn", m.fn},
            {"precision", optional_number(m.precision)},
            {"recall", optional_number(m.recall)},
            {"f1", optional_number(m.f1)},
            {"fpr", optional_number(m.fpr)}};
}

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : std::string("n/a"); }

}  // namespace

void Prediction::validate() const {
    check_class_id(class_id);
    if (bbox.units != BoxUnits::Normalized) throw ContractViolation("prediction boxes must be normalized");
    bbox.validate(kPredictionSlack);
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
        throw ContractViolation(fmt::format("confidence {} outside [0, 1]", confidence));
    }
}

double iou(const BBox& a, const BBox& b) {
    if (a.units != b.units) throw ContractViolation("iou of boxes in different units");
    const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.left(), b.left()));
    const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top()));
    const double inter = ix * iy;
    if (inter <= 0.0) return 0.0;
    const double uni = a.area() + b.area() - inter;
    return std::min(1.0, inter / uni);
}

Matching match_detections(std::span<const Prediction> predictions, std::span<const Annotation> ground_truths,
                          const MatchOptions& options) {
    Matching out;
    out.options = options;
    out.ground_truth_matched.assign(ground_truths.size(), false);

    std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_image;
    for (std::size_t i = 0; i < predictions.size(); ++i) by_image[predictions[i].image_id].first.push_back(i);
    for (std::size_t g = 0; g < ground_truths.size(); ++g) by_image[ground_truths[g].image_id].second.push_back(g);

    out.records.reserve(predictions.size());
    for (auto& [image, members] : by_image) {
        auto& [preds, gts] = members;
        std::stable_sort(preds.begin(), preds.end(), [&](std::size_t a, std::size_t b) {
            return predictions[a].confidence > predictions[b].confidence;
        });
        for (std::size_t p : preds) {
            const auto& pred = predictions[p];
            MatchRecord rec{p, std::nullopt, 0.0};
            double best = -1.0;
            for (std::size_t g : gts) {
                if (out.ground_truth_matched[g]) continue;
                if (options.class_aware && ground_truths[g].class_id != pred.class_id) continue;
                const double overlap = iou(pred.bbox, ground_truths[g].bbox);
                if (overlap >= options.iou_threshold && overlap > best) {
                    best = overlap;
                    rec.ground_truth = g;
                    rec.iou = overlap;
                }
            }
            if (rec.ground_truth) {
                out.ground_truth_matched[*rec.ground_truth] = true;
                ++out.per_class.at(static_cast<std::size_t>(ground_truths[*rec.ground_truth].class_id)).tp;
                ++out.pooled.tp;
            } else {
                ++out.per_class.at(static_cast<std::size_t>(pred.class_id)).fp;
                ++out.pooled.fp;
            }
            out.records.push_back(rec);
        }
    }
    for (std::size_t g = 0; g < ground_truths.size(); ++g) {
        if (!out.ground_truth_matched[g]) {
            ++out.per_class.at(static_cast<std::size_t>(ground_truths[g].class_id)).fn;
            ++out.pooled.fn;
        }
    }
    return out;
}

std::optional<double> f1_score(std::optional<double> precision, std::optional<double> recall) {
    if (!precision || !recall) return std::nullopt;
    const double p = *precision;
    const double r = *recall;
    if (p + r == 0.0) return std::nullopt;
    return (2.0 * p * r) / (p + r);
}

Metrics metrics_from_counts(const ClassCounts& counts, std::size_t negatives) {
    Metrics m;
    m.tp = counts.tp;
    m.fp = counts.fp;
    m.fn = counts.fn;
    if (counts.tp + counts.fp > 0) m.precision = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
    if (counts.tp + counts.fn > 0) m.recall = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
    m.f1 = f1_score(m.precision, m.recall);
    if (negatives > 0) m.fpr = static_cast<double>(counts.fp) / static_cast<double>(negatives);
    return m;
}

MetricsReport compute_metrics(const Matching& matching, std::size_t negatives) {
    MetricsReport report;
    report.negatives = negatives;
    report.pooled = metrics_from_counts(matching.pooled, negatives);
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        report.per_class[c] = metrics_from_counts(matching.per_class[c], negatives);
    }
    return report;
}

Prediction parse_prediction_line(const std::string& line, std::size_t line_no) {
    try {
        const auto doc = nlohmann::json::parse(line);
        Prediction p;
        p.image_id = doc.at("image").get<std::string>();
        p.class_id = doc.at("class").get<int>();
        const auto box = doc.at("bbox").get<std::vector<double>>();
        if (box.size() != 4) throw ContractViolation("bbox must have 4 entries [cx, cy, w, h]");
        p.bbox = BBox{box[0], box[1], box[2], box[3], BoxUnits::Normalized};
        p.confidence = doc.at("conf").get<double>();
        p.validate();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(fmt::format("predictions line {}: {}", line_no, e.what()));
    } catch (const ContractViolation& e) {
        throw IoError(fmt::format("predictions line {}: {}", line_no, e.what()));
    }
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read predictions " + path.string());
    std::vector<Prediction> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_prediction_line(line, line_no));
    }
    return out;
}

void write_predictions(const std::filesystem::path& path, std::span<const Prediction> predictions) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& p : predictions) {
        const nlohmann::json doc = {{"image", p.image_id},
                                    {"class", p.class_id},
                                    {"bbox", {p.bbox.cx, p.bbox.cy, p.bbox.w, p.bbox.h}},
                                    {"conf", p.confidence}};
        out << doc.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

GroundTruth load_ground_truth(const std::filesystem::path& dataset_dir) {
    const auto manifest = synth::load_manifest(dataset_dir / "manifest.json");
    GroundTruth truth;
    truth.non_hotspot_clips = manifest.counts.non_hotspot_clips;
    truth.total_clips = manifest.counts.clips;
    for (const auto& img : manifest.images) {
        truth.image_ids.push_back(img.image_id);
        const auto labels = read_yolo_labels(dataset_dir / "labels" / (img.image_id + ".txt"));
        for (std::size_t i = 0; i < labels.size(); ++i) {
            truth.annotations.push_back({img.image_id, labels[i].class_id, labels[i].bbox});
            truth.label_index.push_back(i);
        }
    }
    return truth;
}

std::vector<std::string> unknown_images(std::span<const Prediction> predictions, const std::set<std::string>& known) {
    std::set<std::string> missing;
    for (const auto& p : predictions) {
        if (!known.contains(p.image_id)) missing.insert(p.image_id);
    }
    return {missing.begin(), missing.end()};
}

nlohmann::json report_to_json(const MetricsReport& report, const Matching& matching,
                              std::span<const Prediction> predictions, const GroundTruth& truth,
                              FprDenominator denominator) {
    nlohmann::json per_class = nlohmann::json::object();
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        per_class[std::to_string(c)] = metrics_to_json(report.per_class[c]);
    }
    auto matches = nlohmann::json::array();
    for (const auto& rec : matching.records) {
        const auto& pred = predictions[rec.prediction];
        matches.push_back({{"image", pred.image_id},
                           {"prediction", rec.prediction},
                           {"ground_truth", rec.ground_truth ? nlohmann::json(truth.label_index.at(*rec.ground_truth))
                                                             : nlohmann::json(nullptr)}});
    }
    return {{"pooled", metrics_to_json(report.pooled)},
            {"per_class", std::move(per_class)},
            {"fpr_denominator",
             {{"kind", denominator == FprDenominator::NonHotspotClips ? "non_hotspot_clips" : "total_clips"},
              {"count", report.negatives}}},
            {"ground_truth_count", matching.pooled.tp + matching.pooled.fn},
            {"prediction_count", matching.pooled.tp + matching.pooled.fp},
            {"iou_threshold", matching.options.iou_threshold},
            {"class_aware", matching.options.class_aware},
            {"matches", std::move(matches)}};
}

std::string format_report_table(const MetricsReport& report) {
    std::string out = fmt::format("{:<8} {:>6} {:>6} {:>6} {:>9} {:>9} {:>9} {:>9}\n", "class", "tp", "fp", "fn",
                                  "precision", "recall", "f1", "fpr");
    const auto row = [&](const std::string& name, const Metrics& m) {
        out += fmt::format("{:<8} {:>6} {:>6} {:>6} {:>9} {:>9} {:>9} {:>9}\n", name, m.tp, m.fp, m.fn,
                           cell(m.precision), cell(m.recall), cell(m.f1), cell(m.fpr));
    };
    for (std::size_t c = 0; c < report.per_class.size(); ++c) row(std::to_string(c), report.per_class[c]);
    row("pooled", report.pooled);
    return out;
}

}  // namespace hotspot::eval
