// Micro-benchmarks for the fusion kernels that sit on the per-observation
// hot path of stream inference.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "evifuse/mass.hpp"

namespace {

using evifuse::CombinationRule;
using evifuse::MassFunction;

std::vector<MassFunction> sample_masses(std::size_t frame_size, std::size_t count) {
    std::vector<int> labels(frame_size);
    for (std::size_t i = 0; i < frame_size; ++i) labels[i] = static_cast<int>(i);
    const auto frame = evifuse::make_frame(labels);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(0.01, 1.0);
    std::vector<MassFunction> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<double> draws(frame_size + 1);
        double total = 0.0;
        for (double& d : draws) total += (d = unif(rng));
        std::vector<double> singletons(frame_size);
        for (std::size_t i = 0; i < frame_size; ++i) singletons[i] = draws[i] / total;
        out.emplace_back(frame, std::move(singletons), draws[frame_size] / total);
    }
    return out;
}

void BM_CombinePair(benchmark::State& state) {
    const auto rule = state.range(1) == 0 ? CombinationRule::dempster : CombinationRule::yager;
    const auto masses = sample_masses(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        auto r = evifuse::combine(masses[0], masses[1], rule);
        benchmark::DoNotOptimize(r.fused.theta());
    }
}
BENCHMARK(BM_CombinePair)->Args({5, 0})->Args({5, 1})->Args({16, 0})->Args({16, 1});

void BM_FoldEnsemble(benchmark::State& state) {
    const auto masses = sample_masses(5, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto r = evifuse::combine_many(masses, CombinationRule::dempster);
        benchmark::DoNotOptimize(r.fused.theta());
    }
}
BENCHMARK(BM_FoldEnsemble)->Arg(3)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
