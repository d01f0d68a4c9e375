#include <benchmark/benchmark.h>

#include "ecx/complexity.hpp"
#include "ecx/rca.hpp"
#include "ecx/relatedness.hpp"
#include "ecx/rng.hpp"
#include "ecx/synth.hpp"

using namespace ecx;

namespace {

SpecializationMatrix fixture(int n_regions, int n_activities, std::uint64_t seed = 1) {
    return prune_to_core(
               synth::gen_specialization(n_regions, n_activities, synth::Random{0.15}, seed))
        .matrix;
}

ActivityPanel panel_fixture(int n_regions, int n_activities, std::uint64_t seed = 1) {
    ActivityPanelBuilder b;
    Rng rng(seed);
    for (int r = 0; r < n_regions; ++r)
        for (int a = 0; a < n_activities; ++a)
            if (rng.bernoulli(0.15))
                b.add("R" + std::to_string(r), "A" + std::to_string(a), 2010,
                      std::exp(rng.normal()));
    return b.build();
}

}  // namespace

static void BM_EigenComplexityDense(benchmark::State& state) {
    const auto m = fixture(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto res = eigen_complexity(m, EigenMethod::dense);
        benchmark::DoNotOptimize(res);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigenComplexityDense)->Arg(100)->Arg(250)->Arg(558)->Complexity()
    ->Unit(benchmark::kMillisecond);

static void BM_EigenComplexityPower(benchmark::State& state) {
    const auto m = fixture(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto res = eigen_complexity(m, EigenMethod::power);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_EigenComplexityPower)->Arg(250)->Arg(558)->Unit(benchmark::kMillisecond);

static void BM_Reflections50(benchmark::State& state) {
    const auto m = fixture(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto res = reflections(m, 50);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_Reflections50)->Arg(250)->Arg(558)->Unit(benchmark::kMillisecond);

static void BM_RcaBinarize(benchmark::State& state) {
    const auto panel = panel_fixture(558, 581);
    for (auto _ : state) {
        auto m = binarize(rca(panel, Baseline::internal(), 2010));
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_RcaBinarize)->Unit(benchmark::kMillisecond);

static void BM_ProximityDensity(benchmark::State& state) {
    const auto m = fixture(558, 581);
    for (auto _ : state) {
        auto phi = proximity(m);
        auto omega = density(m, phi);
        benchmark::DoNotOptimize(omega);
    }
}
BENCHMARK(BM_ProximityDensity)->Unit(benchmark::kMillisecond);
