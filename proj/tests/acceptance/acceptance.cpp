// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hotspot/clip.hpp"
#include "hotspot/clip_gen.hpp"
#include "hotspot/dataset.hpp"
#include "hotspot/errors.hpp"
#include "hotspot/eval.hpp"
#include "hotspot/features.hpp"
#include "hotspot/png_io.hpp"
#include "oracles.hpp"

using namespace hotspot;
using hotspot::features::SquareMatrix;
using hotspot::oracle::Matrix;
using hotspot::oracle::TempDir;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects failures; the first few messages are kept for the report line.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) messages_.push_back(what);
    }
    Outcome outcome(std::string detail) const {
        if (failures_ == 0) return {true, std::move(detail)};
        std::string msg = fmt::format("{} failure(s): ", failures_);
        for (const auto& m : messages_) msg += m + "; ";
        return {false, msg + detail};
    }

private:
    int failures_ = 0;
    std::vector<std::string> messages_;
};

SquareMatrix to_square(const Matrix& m) {
    SquareMatrix out(static_cast<int>(m.size()));
    for (int r = 0; r < out.size(); ++r) {
        for (int c = 0; c < out.size(); ++c) out(r, c) = m[r][c];
    }
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct CliRun {
    int code;
    std::string out;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hotspot");
    std::ostringstream out;
    const int code = app::run_cli(args, out);
    return {code, out.str()};
}

std::filesystem::path write_config(const TempDir& dir, const std::string& name, json doc) {
    doc["log_level"] = "error";
    const auto path = dir / name;
    std::ofstream(path) << doc.dump();
    return path;
}

double boundary_gap(const std::vector<double>& spectrum, int k, double t) {
    const double total = std::accumulate(spectrum.begin(), spectrum.end(), 0.0);
    if (total == 0.0) return 1.0;
    double gap = 1.0;
    for (int j : {k - 1, k}) {
        if (j < 1) continue;
        const double prefix = std::accumulate(spectrum.begin(), spectrum.begin() + j, 0.0);
        gap = std::min(gap, std::abs(prefix / total - t));
    }
    return gap;
}

Outcome oracle_equivalence() {
    constexpr double t = 0.999;
    Check check;
    Rng rng(0xA11CE);
    int compared = 0;
    int excluded = 0;
    for (int n : {4, 8, 16, 32}) {
        for (int i = 0; i < 1000; ++i) {
            const auto raw = oracle::random_binary_tile(n, rng, 0.1 + 0.8 * rng.uniform());
            const auto oracle = oracle::composed_oracle(raw, t);
            if (oracle.boundary_gap < 1e-6) {
                ++excluded;
                continue;
            }
            ++compared;
            const auto tile = to_square(raw);
            const int k = features::extract_tile_feature(tile, t).k;
            const int fast = features::tile_variance_count(tile, t);
            check.expect(k == oracle.k, fmt::format("n={} tile {}: k={} oracle={}", n, i, k, oracle.k));
            check.expect(fast == oracle.k, fmt::format("n={} tile {}: fast k={} oracle={}", n, i, fast, oracle.k));
        }
    }
    return check.outcome(fmt::format("{} tiles compared, {} near-tie tiles excluded", compared, excluded));
}

Outcome algebraic_invariants() {
    constexpr double t = 0.999;
    Check check;
    Rng rng(0xB0B);
    int excluded = 0;
    for (int i = 0; i < 10000; ++i) {
        const int n = 4 << (i % 4);
        const auto base = to_square(oracle::random_binary_tile(n, rng, 0.1 + 0.8 * rng.uniform()));
        const auto feature = features::extract_tile_feature(base, t);
        if (boundary_gap(feature.trace.spectrum, feature.k, t) < 1e-6) {
            ++excluded;
            continue;
        }
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        for (int j = n - 1; j > 0; --j) std::swap(perm[j], perm[rng.below(static_cast<std::uint64_t>(j + 1))]);
        const double shift = static_cast<double>(rng.below(1000)) - 500.0;
        const double scale = 0.01 + 10.0 * rng.uniform();
        SquareMatrix shifted = base;
        SquareMatrix scaled = base;
        SquareMatrix permuted = base;
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                shifted(r, c) = base(r, c) + shift;
                scaled(r, c) = base(r, c) * scale;
                permuted(r, c) = base(r, perm[c]);
            }
        }
        const int k = feature.k;
        check.expect(features::extract_tile_feature(shifted, t).k == k, fmt::format("shift, tile {}", i));
        check.expect(features::extract_tile_feature(scaled, t).k == k, fmt::format("scale, tile {}", i));
        check.expect(features::extract_tile_feature(permuted, t).k == k, fmt::format("permutation, tile {}", i));
    }

    std::vector<double> thresholds;
    for (int i = 1; i <= 100; ++i) thresholds.push_back(i / 100.0);
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> s(1 + rng.below(64));
        for (auto& v : s) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform() * 1000.0;
        std::sort(s.begin(), s.end(), std::greater<>());
        int previous = 0;
        for (double th : thresholds) {
            const int k = features::count_components(s, th);
            check.expect(k >= previous, fmt::format("spectrum {} not monotone at t={}", i, th));
            previous = k;
        }
    }
    return check.outcome(fmt::format("10000 tiles x 3 transforms ({} near-tie excluded), 10000 spectra", excluded));
}

Outcome analytic_fixtures() {
    Check check;
    check.expect(features::extract_tile_feature(SquareMatrix(8, 255.0), 0.999).k == 0, "constant tile k != 0");
    SquareMatrix one(8, 0.0);
    for (int r = 0; r < 8; ++r) one(r, 2) = (r % 2) ? 255.0 : 0.0;
    for (double t : {0.1, 0.5, 0.999}) {
        check.expect(features::extract_tile_feature(one, t).k == 1, fmt::format("single column k != 1 at t={}", t));
    }
    SquareMatrix diag(3);
    diag(0, 0) = 3;
    diag(1, 1) = 1;
    diag(2, 2) = 2;
    check.expect(features::eigen_spectrum(diag) == std::vector<double>{3, 2, 1}, "diag(3,1,2) spectrum");
    const auto s = features::eigen_spectrum(SquareMatrix(2, {1, 1, 1, 1}));
    check.expect(s.size() == 2 && std::abs(s[0] - 2.0) < 1e-12 && std::abs(s[1]) < 1e-12,
                 fmt::format("[[1,1],[1,1]] spectrum [{}, {}]", s.at(0), s.at(1)));
    return check.outcome("constant, single-column, diagonal and rank-one fixtures");
}

Outcome f1_reference_rows() {
    Check check;
    struct Row {
        int p_milli, r_milli;
        double f1;
    };
    std::string detail;
    for (const Row& row : {Row{832, 869, 0.850}, Row{853, 858, 0.855}, Row{907, 825, 0.864}}) {
        // Counts with precision exactly p/1000 and recall exactly r/1000.
        const std::size_t tp = static_cast<std::size_t>(row.p_milli) * static_cast<std::size_t>(row.r_milli);
        const eval::ClassCounts counts{tp, static_cast<std::size_t>(row.r_milli) * 1000 - tp,
                                       static_cast<std::size_t>(row.p_milli) * 1000 - tp};
        const auto m = eval::metrics_from_counts(counts, 1);
        const double f1 = m.f1.value_or(-1.0);
        check.expect(std::abs(f1 - row.f1) <= 0.0005, fmt::format("P={} R={} F1={:.6f}", row.p_milli, row.r_milli, f1));
        detail += fmt::format("({:.3f}, {:.3f}) -> {:.4f}  ", *m.precision, *m.recall, f1);
    }
    return check.outcome(detail);
}

Outcome matching_oracle() {
    Check check;
    const auto doc = json::parse(slurp(oracle::fixture_dir() / "matching_cases.json"));
    const double threshold = doc.at("iou_threshold").get<double>();
    const auto box = [](const json& a) {
        return BBox{a[0].get<double>(), a[1].get<double>(), a[2].get<double>(), a[3].get<double>(), BoxUnits::Normalized};
    };
    std::size_t cases = 0;
    for (const auto& c : doc.at("cases")) {
        std::vector<eval::Prediction> preds;
        std::vector<Annotation> gts;
        for (const auto& p : c.at("predictions")) {
            preds.push_back({p.at("image"), p.at("class").get<int>(), box(p.at("bbox")), p.at("conf").get<double>()});
        }
        for (const auto& g : c.at("ground_truths")) gts.push_back({g.at("image"), g.at("class").get<int>(), box(g.at("bbox"))});
        const auto m = eval::match_detections(preds, gts, {threshold, c.at("class_aware").get<bool>()});
        bool same = m.records.size() == c.at("greedy").size();
        for (std::size_t i = 0; same && i < m.records.size(); ++i) {
            const auto& g = c["greedy"][i];
            same = m.records[i].prediction == g[0].get<std::size_t>() &&
                   (g[1].is_null() ? !m.records[i].ground_truth
                                   : m.records[i].ground_truth == std::optional<std::size_t>(g[1].get<std::size_t>()));
        }
        same = same && m.pooled.tp == c.at("greedy_tp").get<std::size_t>();
        check.expect(same, fmt::format("case {}", cases));
        ++cases;
    }

    Rng rng(0x10);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto rect = [&] {
            return PixelRect{static_cast<int>(rng.below(50)), static_cast<int>(rng.below(50)), 1 + static_cast<int>(rng.below(40)),
                             1 + static_cast<int>(rng.below(40))};
        };
        const auto a = rect();
        const auto b = rect();
        const auto to_box = [](const PixelRect& r) { return BBox{r.x + r.w / 2.0, r.y + r.h / 2.0, double(r.w), double(r.h)}; };
        const double diff = std::abs(eval::iou(to_box(a), to_box(b)) - oracle::pixel_count_iou(a, b));
        worst = std::max(worst, diff);
        check.expect(diff <= 1e-9, fmt::format("iou pair {} differs by {}", i, diff));
    }
    return check.outcome(fmt::format("{} matching fixtures, 1000 IoU pairs (max deviation {:.2e})", cases, worst));
}

Outcome dataset_geometry() {
    Check check;
    const auto library = make_synthetic_library({256, 24, 4, 11});

    auto d1 = synth::preset("dataset1");
    d1.num_images = 10;
    const synth::PreparedLibrary lib1(library, d1);
    std::size_t placements = 0;
    std::size_t boxes = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto r = synth::render_image(d1, lib1, synth::plan_image(d1, lib1, i));
        placements += r.composition.placements.size();
        for (const auto& p : r.composition.placements) {
            if (!p.is_hotspot) continue;
            ++boxes;
            const auto it = std::find_if(r.composition.annotations.begin(), r.composition.annotations.end(), [&](const Annotation& a) {
                return a.bbox.cx == p.rect.x + 128.0 && a.bbox.cy == p.rect.y + 128.0;
            });
            check.expect(it != r.composition.annotations.end() && it->bbox.w == 64.0 && it->bbox.h == 64.0 && p.rect.w == 256,
                         fmt::format("dataset1 image {} box for {}", i, p.clip_id));
        }
    }
    check.expect(placements == 160, fmt::format("dataset1 placements {}", placements));

    auto d4 = synth::preset("dataset4");
    const synth::PreparedLibrary lib4(library, d4);
    for (std::size_t i = 0; i < 5; ++i) {
        const auto r = synth::render_image(d4, lib4, synth::plan_image(d4, lib4, i));
        check.expect(r.composition.placements.size() == 64, "dataset4 placements per image");
        for (const auto& a : r.composition.annotations) check.expect(a.bbox.w == 32.0 && a.bbox.h == 32.0, "dataset4 box side");
    }

    std::size_t overlap_checks = 0;
    std::size_t wire_pixels = 0;
    for (const char* name : {"dataset2", "dataset3"}) {
        const auto config = synth::preset(name);
        const synth::PreparedLibrary lib(library, config);
        const int margin = config.style.wires.wire_width;
        for (std::size_t i = 0; i < 100; ++i) {
            const auto plan = synth::plan_image(config, lib, i);
            const auto r = synth::render_image(config, lib, plan);
            const auto& ps = r.composition.placements;
            for (std::size_t a = 0; a < ps.size(); ++a) {
                for (std::size_t b = a + 1; b < ps.size(); ++b) {
                    ++overlap_checks;
                    check.expect(!ps[a].rect.intersects(ps[b].rect), fmt::format("{} image {} overlap", name, i));
                }
            }
            if (config.style.kind != synth::LayoutKind::JitteredRowsWired) continue;
            const auto bare = synth::render_image(config, lib, plan, false);
            std::vector<synth::Band> bands;
            for (const auto& a : r.composition.annotations) bands.push_back(synth::hotspot_band(a.bbox, margin));
            const auto& img = r.composition.image;
            for (int y = 0; y < img.height(); ++y) {
                for (int x = 0; x < img.width(); ++x) {
                    if (img.at(x, y) == bare.composition.image.at(x, y)) continue;
                    ++wire_pixels;
                    const bool in_clip = std::any_of(ps.begin(), ps.end(), [&](const synth::Placement& p) { return p.rect.contains(x, y); });
                    const bool in_band = std::any_of(bands.begin(), bands.end(), [&](const synth::Band& b) { return b.overlaps(y, y + 1); });
                    check.expect(!in_clip && !in_band, fmt::format("{} image {} wire pixel ({}, {})", name, i, x, y));
                }
            }
        }
    }
    check.expect(wire_pixels > 0, "dataset3 drew no wires");
    return check.outcome(fmt::format("160 dataset1 placements ({} boxes), 5 dataset4 images, {} pair checks, {} wire pixels scanned",
                                     boxes, overlap_checks, wire_pixels));
}

Outcome determinism() {
    Check check;
    TempDir dir("acceptance_det");
    save_clip_library(dir / "lib", make_synthetic_library({256, 16, 3, 21}));
    const auto synth_cfg =
        write_config(dir, "s.json", {{"synth", {{"library", (dir / "lib").string()}, {"preset", "dataset3"}, {"num_images", 8}}}});
    check.expect(cli({"--config", synth_cfg.string(), "--out", (dir / "s1").string(), "synth"}).code == 0, "synth run 1");
    check.expect(cli({"--config", synth_cfg.string(), "--out", (dir / "s2").string(), "--workers", "3", "synth"}).code == 0, "synth run 2");
    const auto h1 = oracle::directory_hash(dir / "s1");
    check.expect(h1 == oracle::directory_hash(dir / "s2"), "synth hashes differ");

    const auto aug_cfg = write_config(dir, "a.json", {{"augment", {{"input", (dir / "s1" / "images").string()}}}});
    check.expect(cli({"--config", aug_cfg.string(), "--out", (dir / "a1").string(), "--workers", "1", "augment"}).code == 0, "augment w1");
    check.expect(cli({"--config", aug_cfg.string(), "--out", (dir / "a8").string(), "--workers", "8", "augment"}).code == 0, "augment w8");
    const auto a1 = oracle::directory_hash(dir / "a1");
    check.expect(a1 == oracle::directory_hash(dir / "a8"), "augment hashes differ between 1 and 8 workers");
    return check.outcome(fmt::format("synth hash {:016x}, augment hash {:016x}", h1, a1));
}

Outcome performance() {
    TempDir dir("acceptance_perf");
    const auto clips = make_synthetic_library({256, 600, 100, 33});
    std::filesystem::create_directories(dir / "in");
    for (const auto& c : clips) write_gray_png(dir / "in" / (c.id() + ".png"), c.raster());
    const auto cfg = write_config(dir, "a.json", {{"augment", {{"input", (dir / "in").string()}}}});
    const auto r = cli({"--config", cfg.string(), "--out", (dir / "out").string(), "--workers", "1", "augment"});
    if (r.code != 0) return {false, fmt::format("augment exited with {}", r.code)};
    const auto summary = json::parse(r.out);
    const auto images = summary.at("images").get<std::size_t>();
    const double mean = summary.at("mean_clip_ms").get<double>();
    const bool pass = images == 1000 && mean <= 20.0;
    return {pass, fmt::format("{} clips, mean {:.3f} ms/clip single-threaded (target 10 ms: {}; ceiling 20 ms)", images, mean,
                              mean <= 10.0 ? "met" : "missed")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"oracle_equivalence", oracle_equivalence},
        {"algebraic_invariants", algebraic_invariants},
        {"analytic_fixtures", analytic_fixtures},
        {"f1_reference_rows", f1_reference_rows},
        {"matching_oracle", matching_oracle},
        {"dataset_geometry", dataset_geometry},
        {"determinism", determinism},
        {"performance", performance},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << fmt::format("{:.1f}", secs) << " s): " << o.detail
                  << std::endl;
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
