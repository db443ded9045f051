#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "hotspot/dataset.hpp"
#include "run_config.hpp"

namespace hotspot::app {

struct AugmentSummary {
    std::size_t images = 0;
    int workers = 1;
    double wall_ms = 0.0;
    std::optional<double> mean_clip_ms;  ///< feature computation only, excludes PNG I/O

    nlohmann::json to_json() const;
};

/// Each subcommand validates its inputs before writing anything, then throws
/// on failure (see errors.hpp); run_cli maps exceptions to exit codes.

/// Augments every PNG under augment.input (or the single file it names) into
/// out/<stem>.png; with export_kmaps also writes <stem>.k<side>.json for both
/// scales and <stem>.fused.f32. Prints the summary JSON to `out`.
AugmentSummary cmd_augment(const RunConfig& config, std::ostream& out);

/// Generates a dataset under config.out from synth.library.
synth::DatasetManifest cmd_synth(const RunConfig& config, std::ostream& out);

/// Scores eval.predictions against eval.dataset; writes out/report.json and
/// prints a table to `out`. Returns the report document.
nlohmann::json cmd_eval(const RunConfig& config, std::ostream& out);

/// Writes overlay PNGs; returns their paths.
std::vector<std::filesystem::path> cmd_inspect(const RunConfig& config, std::ostream& out);

/// PNG files directly inside `input` in name order, or `input` itself if it
/// is a file.
std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& input);

}  // namespace hotspot::app
