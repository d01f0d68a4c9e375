#include <benchmark/benchmark.h>

#include "ecx/rng.hpp"
#include "ecx/spatial.hpp"
#include "ecx/synth.hpp"

using namespace ecx;

static void BM_MoransI(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto g = synth::gen_region_graph(synth::Grid{side, side});
    Rng rng(3);
    std::map<std::string, double> values;
    for (const auto& r : g.regions()) values[r] = rng.normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(morans_i(values, g));
    }
}
BENCHMARK(BM_MoransI)->Arg(10)->Arg(24);

static void BM_NeighborAverage(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto g = synth::gen_region_graph(synth::Grid{side, side});
    Rng rng(4);
    std::map<std::string, double> values;
    for (const auto& r : g.regions()) values[r] = rng.normal();
    for (auto _ : state) {
        auto res = neighbor_average(values, g);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_NeighborAverage)->Arg(10)->Arg(24);
