#include <benchmark/benchmark.h>

#include "latmix/mixing.hpp"
#include "latmix/oracle.hpp"
#include "latmix/sampler.hpp"
#include "latmix/spectral.hpp"

using namespace latmix;

static void BM_GibbsStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ProblemInstance inst = gen_gaussian_instance(n, 10.0, 1, true);
    GibbsChain chain(inst, 1.0, SpinState::all_minus_one(n));
    Rng site(1), draw(2);
    for (auto _ : state) {
        chain.step(site, draw);
        benchmark::DoNotOptimize(chain.state().code);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GibbsStep)->Arg(4)->Arg(8)->Arg(12);

static void BM_ExhaustiveObjectives(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ProblemInstance inst = gen_gaussian_instance(n, 10.0, 2, true);
    for (auto _ : state) {
        auto table = exhaustive_objectives(inst);
        benchmark::DoNotOptimize(table.data());
    }
    state.SetComplexityN(1 << n);
}
BENCHMARK(BM_ExhaustiveObjectives)->Arg(8)->Arg(12)->Arg(14)->Complexity();

static void BM_LocalMinimaScan(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ProblemInstance inst = gen_gaussian_instance(n, 10.0, 3, false);
    for (auto _ : state) {
        auto report = local_minima_bruteforce(inst);
        benchmark::DoNotOptimize(report.minima.size());
    }
}
BENCHMARK(BM_LocalMinimaScan)->Arg(8)->Arg(10)->Arg(12);

static void BM_BuildTransitionMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ProblemInstance inst = gen_gaussian_instance(n, 10.0, 4, true);
    for (auto _ : state) {
        TransitionMatrix tm = build_transition_matrix(inst, 1.0);
        benchmark::DoNotOptimize(tm.p.data());
    }
}
BENCHMARK(BM_BuildTransitionMatrix)->Arg(6)->Arg(8)->Arg(10);

static void BM_SpectralGap(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ProblemInstance inst = gen_gaussian_instance(n, 10.0, 5, true);
    const TransitionMatrix tm = build_transition_matrix(inst, 1.0);
    for (auto _ : state) {
        SpectrumReport report = spectral_gap(tm);
        benchmark::DoNotOptimize(report.gap);
    }
}
BENCHMARK(BM_SpectralGap)->Arg(6)->Arg(8);
