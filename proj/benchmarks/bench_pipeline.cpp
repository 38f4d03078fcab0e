// Micro-benchmarks for the per-observation inference pipeline: building a
// basic probability assignment from one member's vote, running the full
// ensemble on a row, and fusing the ensemble verdict with rule evidence.

#include <benchmark/benchmark.h>

#include <vector>

#include "evifuse/experiments.hpp"
#include "evifuse/system_fusion.hpp"

namespace {

using namespace evifuse;

ExperimentConfig small_world() {
    ExperimentConfig cfg = default_experiment_config();
    cfg.synthetic->train_rows_per_class = 120;
    cfg.synthetic->stream_rows_per_block = 50;
    return cfg;
}

void BM_PredictionToMass(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i);
    const FramePtr frame = make_frame(labels);
    const ConfidenceWeights weights = ConfidenceWeights::uniform(frame, 0.9);
    const SensitivityFactor k = k_factor(4);
    for (auto _ : state) {
        const MassFunction m = prediction_to_mass(static_cast<int>(n) / 2, weights, k);
        benchmark::DoNotOptimize(m.theta());
    }
}
BENCHMARK(BM_PredictionToMass)->Arg(5)->Arg(16);

void BM_EnsembleInfer(benchmark::State& state) {
    const ExperimentConfig cfg = small_world();
    const StudySystem system = build_study_system(cfg);
    const Dataset stream =
        make_synthetic_stream(*cfg.synthetic, cfg.update.anomaly_label, cfg.seed + 1);
    std::size_t row = 0;
    for (auto _ : state) {
        const EnsembleVerdict v = ec_infer(*system.ensemble, stream.features[row]);
        benchmark::DoNotOptimize(v.u_d);
        row = (row + 1) % stream.rows();
    }
}
BENCHMARK(BM_EnsembleInfer);

void BM_SystemFuse(benchmark::State& state) {
    const ExperimentConfig cfg = small_world();
    const StudySystem system = build_study_system(cfg);
    const Dataset stream =
        make_synthetic_stream(*cfg.synthetic, cfg.update.anomaly_label, cfg.seed + 1);
    const EnsembleVerdict ev = ec_infer(*system.ensemble, stream.features[0]);
    const RuleVerdict rv =
        klafate_infer_row(*system.rules, stream.feature_names, stream.features[0]);
    for (auto _ : state) {
        const SystemVerdict sv = system_fuse(ev, rv.mass);
        benchmark::DoNotOptimize(sv.u_d_sys);
    }
}
BENCHMARK(BM_SystemFuse);

}  // namespace
