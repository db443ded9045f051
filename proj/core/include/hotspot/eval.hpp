#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hotspot/geometry.hpp"

namespace hotspot::eval {

struct Prediction {
    std::string image_id;
    int class_id = 0;
    BBox bbox;  ///< normalized
    double confidence = 0.0;

    void validate() const;
};

/// Intersection over union; 0 for disjoint boxes. Both boxes must use the same units.
double iou(const BBox& a, const BBox& b);

struct MatchOptions {
    double iou_threshold = 0.5;
    bool class_aware = true;
};

/// Outcome for one prediction. `ground_truth` indexes the ground-truth input.
struct MatchRecord {
    std::size_t prediction = 0;
    std::optional<std::size_t> ground_truth;
    double iou = 0.0;
};

struct ClassCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    bool operator==(const ClassCounts&) const = default;
};

struct Matching {
    MatchOptions options;
    /// One record per prediction, grouped by image id (ascending), then in
    /// matching order (confidence descending, input order on ties).
    std::vector<MatchRecord> records;
    std::vector<bool> ground_truth_matched;
    /// TP and FN are attributed to the ground truth's class, FP to the
    /// prediction's class.
    std::array<ClassCounts, kNumClasses> per_class{};
    ClassCounts pooled;
};

/// Greedy confidence-ordered matching, independently per image. Each
/// prediction takes the unmatched ground truth (of the same class when
/// class-aware) with the highest IoU >= threshold; IoU ties go to the lower
/// ground-truth index.
Matching match_detections(std::span<const Prediction> predictions, std::span<const Annotation> ground_truths,
                          const MatchOptions& options = {});

struct Metrics {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::optional<double> precision;  ///< nullopt when TP + FP = 0
    std::optional<double> recall;     ///< nullopt when TP + FN = 0
    std::optional<double> f1;         ///< nullopt when P or R is undefined or P + R = 0
    std::optional<double> fpr;        ///< nullopt when the negative population is 0
};

enum class FprDenominator { NonHotspotClips, TotalClips };

struct MetricsReport {
    Metrics pooled;
    std::array<Metrics, kNumClasses> per_class{};
    std::size_t negatives = 0;  ///< denominator used for FPR
};

/// F1 from precision and recall; nullopt when undefined.
std::optional<double> f1_score(std::optional<double> precision, std::optional<double> recall);

Metrics metrics_from_counts(const ClassCounts& counts, std::size_t negatives);

/// Pooled (micro-averaged) and per-class metrics. FPR = FP / negatives.
MetricsReport compute_metrics(const Matching& matching, std::size_t negatives);

/// Predictions as JSON Lines: {"image": id, "class": int, "bbox": [cx, cy, w, h], "conf": float}.
Prediction parse_prediction_line(const std::string& line, std::size_t line_no);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path, std::span<const Prediction> predictions);

struct GroundTruth {
    std::vector<std::string> image_ids;     ///< manifest order
    std::vector<Annotation> annotations;    ///< normalized boxes, label-file order per image
    std::vector<std::size_t> label_index;   ///< position of each annotation in its label file
    std::size_t non_hotspot_clips = 0;
    std::size_t total_clips = 0;
};

/// Reads manifest.json for the image list and clip populations, and
/// labels/{id}.txt for the boxes.
GroundTruth load_ground_truth(const std::filesystem::path& dataset_dir);

/// Prediction image ids absent from `known`, sorted, without duplicates.
std::vector<std::string> unknown_images(std::span<const Prediction> predictions, const std::set<std::string>& known);

/// Report JSON: {"pooled": {...}, "per_class": {"0": {...}, ...}, "fpr_denominator": {...},
/// "iou_threshold", "class_aware", "matches": [...]}. Undefined metrics are null.
nlohmann::json report_to_json(const MetricsReport& report, const Matching& matching,
                              std::span<const Prediction> predictions, const GroundTruth& truth,
                              FprDenominator denominator);

/// Fixed-width text table of the report for terminals.
std::string format_report_table(const MetricsReport& report);

}  // namespace hotspot::eval
