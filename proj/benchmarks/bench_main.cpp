#include <benchmark/benchmark.h>

#include <variant>

#include "hestonmle/estimate.hpp"
#include "hestonmle/montecarlo.hpp"
#include "hestonmle/simulate.hpp"
#include "hestonmle/stats.hpp"

using namespace hestonmle;

namespace {

VolSeries canonical_path(std::size_t N) {
    PathConfig cfg;
    cfg.seed = 1;
    return std::get<VolSeries>(subsampled_vol_series(canonical_vol_params(3.5), {0.0659, N}, cfg));
}

void BM_SufficientStats(benchmark::State& state) {
    const auto path = canonical_path(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sufficient_stats(path));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SufficientStats)->RangeMultiplier(10)->Range(1000, 100000);

void BM_ClosedFormMle(benchmark::State& state) {
    const auto s = sufficient_stats(canonical_path(10000));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_volatility(s));
}
BENCHMARK(BM_ClosedFormMle);

void BM_FullEstimate(benchmark::State& state) {
    const auto path = canonical_path(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(estimate(path));
}
BENCHMARK(BM_FullEstimate)->Arg(252)->Arg(10000);

void BM_ExactPath(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    PathConfig cfg;
    std::uint64_t stream = 0;
    for (auto _ : state) {
        cfg.stream_id = stream++;
        benchmark::DoNotOptimize(subsampled_vol_series(canonical_vol_params(3.5), {0.0659, N}, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExactPath)->Arg(10000);

void BM_EulerPath(benchmark::State& state) {
    const auto N = static_cast<std::size_t>(state.range(0));
    PathConfig cfg;
    cfg.scheme = EulerScheme{0.0659 / kDefaultEulerSubsteps};
    std::uint64_t stream = 0;
    for (auto _ : state) {
        cfg.stream_id = stream++;
        benchmark::DoNotOptimize(subsampled_vol_series(canonical_vol_params(3.5), {0.0659, N}, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * kDefaultEulerSubsteps);
}
BENCHMARK(BM_EulerPath)->Arg(10000);

void BM_AccuracyCell(benchmark::State& state) {
    AccuracySpec spec;
    spec.canonical = {0.936, 3.5};
    spec.Tbar = 0.0659;
    spec.N_values = {1000};
    spec.trajectories = 100;
    spec.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_accuracy(spec));
}
BENCHMARK(BM_AccuracyCell)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
