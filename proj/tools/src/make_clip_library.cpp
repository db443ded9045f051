// Writes the procedural stand-in clip library used by tests and examples.
#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>

#include "hotspot/clip.hpp"
#include "hotspot/clip_gen.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic clip library (index.json + PNGs)"};
    std::filesystem::path out;
    hotspot::SyntheticLibrarySpec spec;
    app.add_option("out", out, "output directory")->required();
    app.add_option("--side", spec.side, "clip side in pixels");
    app.add_option("--non-hotspot", spec.non_hotspot, "number of non-hotspot clips");
    app.add_option("--per-class", spec.hotspot_per_class, "hotspot clips per class");
    app.add_option("--seed", spec.seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    try {
        hotspot::save_clip_library(out, hotspot::make_synthetic_library(spec));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
