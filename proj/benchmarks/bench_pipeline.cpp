// Hot-path timings: preprocessing, matching, cloning, synthesis.
#include "artifact/clone.hpp"
#include "artifact/eval.hpp"
#include "artifact/image.hpp"
#include "artifact/rng.hpp"
#include "artifact/similarity.hpp"
#include "artifact/synth.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

namespace {

artifact::GrayImage random_image(std::uint64_t seed, int side) {
    artifact::rng::Stream stream(seed);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(side) * side);
    for (auto& v : px)
        v = static_cast<std::uint8_t>(stream.uniform_int(0, 255));
    return artifact::GrayImage(side, side, std::move(px));
}

artifact::GrayImage master_crop(std::uint64_t seed, int side) {
    artifact::PillarArraySpec spec;
    spec.seed = seed;
    return artifact::center_crop(artifact::generate_master(spec), side);
}

void BM_MedianFilter(benchmark::State& state) {
    const auto img = random_image(1, static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(artifact::median_filter(img, 11));
    state.SetItemsProcessed(state.iterations() * img.pixel_count());
}
BENCHMARK(BM_MedianFilter)->Arg(256)->Arg(512);

void BM_MaskedPearson(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto a = master_crop(2, side);
    const auto b = master_crop(3, side);
    const auto mask = artifact::build_mask(a, b, 90);
    for (auto _ : state)
        benchmark::DoNotOptimize(artifact::masked_pearson(a, b, mask));
    state.SetItemsProcessed(state.iterations() * a.pixel_count());
}
BENCHMARK(BM_MaskedPearson)->Arg(224)->Arg(512);

void BM_ShiftedSimilarity(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto a = master_crop(4, side);
    const auto b = master_crop(5, side);
    for (auto _ : state)
        benchmark::DoNotOptimize(artifact::shifted_similarity(a, b));
    state.SetItemsProcessed(state.iterations() * 21 * a.pixel_count());
}
BENCHMARK(BM_ShiftedSimilarity)->Arg(224)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_VirtualClone(benchmark::State& state) {
    const auto img = master_crop(6, 512);
    artifact::CloneParams params;
    params.k = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(artifact::make_virtual_clone(img, params));
}
BENCHMARK(BM_VirtualClone)->Arg(3)->Arg(18);

void BM_GenerateMaster(benchmark::State& state) {
    artifact::PillarArraySpec spec;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        spec.seed = ++seed;
        benchmark::DoNotOptimize(artifact::generate_master(spec));
    }
}
BENCHMARK(BM_GenerateMaster)->Unit(benchmark::kMillisecond);

void BM_Measure(benchmark::State& state) {
    const auto master = master_crop(7, 256);
    artifact::MeasurementModel model;
    int index = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(artifact::measure(master, model, index++));
}
BENCHMARK(BM_Measure)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
