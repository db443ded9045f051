#include <benchmark/benchmark.h>

#include "hotspot/clip_gen.hpp"
#include "hotspot/features.hpp"
#include "hotspot/rng.hpp"

using namespace hotspot;
using namespace hotspot::features;

namespace {

SquareMatrix random_tile(int n, std::uint64_t seed) {
    Rng rng(seed);
    SquareMatrix m(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) m(r, c) = rng.uniform() < 0.5 ? 255.0 : 0.0;
    }
    return m;
}

const GrayRaster& layout_clip() {
    static const GrayRaster clip = make_synthetic_library({256, 1, 0, 9}).front().raster();
    return clip;
}

void BM_ExtractTileFeature(benchmark::State& state) {
    const auto tile = random_tile(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(extract_tile_feature(tile, 0.999).k);
}
BENCHMARK(BM_ExtractTileFeature)->Arg(32)->Arg(128);

void BM_TileVarianceCountRandom(benchmark::State& state) {
    const auto tile = random_tile(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(tile_variance_count(tile, 0.999));
}
BENCHMARK(BM_TileVarianceCountRandom)->Arg(32)->Arg(128);

void BM_TileVarianceCountLayout(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto tile = SquareMatrix::from_tile(layout_clip(), 0, 0, n);
    for (auto _ : state) benchmark::DoNotOptimize(tile_variance_count(tile, 0.999));
}
BENCHMARK(BM_TileVarianceCountLayout)->Arg(32)->Arg(128);

void BM_AugmentClip(benchmark::State& state) {
    const FeatureParams params;
    for (auto _ : state) benchmark::DoNotOptimize(augment_image(layout_clip(), params));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AugmentClip)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
