#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hotspot/dataset.hpp"
#include "hotspot/eval.hpp"
#include "hotspot/features.hpp"

namespace hotspot::app {

struct AugmentSection {
    std::filesystem::path input;  ///< a PNG file or a directory of PNGs
    bool export_kmaps = false;
};

struct SynthSection {
    std::filesystem::path library;
    synth::SynthConfig config;
};

struct EvalSection {
    std::filesystem::path dataset;
    std::filesystem::path predictions;
    eval::MatchOptions match;
    eval::FprDenominator fpr_denominator = eval::FprDenominator::NonHotspotClips;
};

enum class InspectMode { KMap, Annotations };

struct InspectSection {
    InspectMode mode = InspectMode::KMap;
    std::filesystem::path input;        ///< kmap mode
    std::filesystem::path dataset;      ///< annotations mode
    std::filesystem::path predictions;  ///< annotations mode, optional
};

/// Everything a subcommand needs. Layered as defaults <- config file <- flags.
struct RunConfig {
    int workers = 0;  ///< 0 = available parallelism
    std::string log_level = "info";
    std::filesystem::path out = "out";
    features::FeatureParams features;
    AugmentSection augment;
    SynthSection synth;
    EvalSection eval;
    InspectSection inspect;
};

nlohmann::json to_json(const RunConfig& config);

/// Overlays `doc` on `base`. Unknown keys and ill-typed values raise
/// ContractViolation.
RunConfig merge_json(const nlohmann::json& doc, RunConfig base = {});

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace hotspot::app
