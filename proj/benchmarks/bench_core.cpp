// Micro benchmarks for the simulation, estimation, and forecasting hot paths.
// Build with -DNONCAUSAL_BUILD_BENCHMARKS=ON and run the noncausal_benchmarks
// binary; google-benchmark picks iteration counts automatically.

#include <benchmark/benchmark.h>

#include "noncausal/credibility.hpp"
#include "noncausal/density_forecast.hpp"
#include "noncausal/estimation.hpp"
#include "noncausal/model.hpp"
#include "noncausal/process.hpp"
#include "noncausal/timeseries.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace {

using namespace noncausal;

MarModel reference_model() { return MarModel{{0.5}, {0.8}, {4.0, 1.0}}; }

TimeSeries reference_series(int n, std::uint64_t seed) {
    return simulate(Model(reference_model()), n, seed).series;
}

// Fitted-state fixture shared by the forecast benchmarks so each iteration
// measures only the forecast itself, not the preceding estimation.
struct ForecastFixture {
    TimeSeries series;
    FitResult fit;
    BoundsSeries band;

    ForecastFixture()
        : series(reference_series(400, 99)),
          fit(fit_mar_amle(series, 1, 1, 4)),
          band(add_months(series.start(), 1), std::vector<double>(420, -1.5),
               std::vector<double>(420, 1.5)) {}
};

const ForecastFixture& fixture() {
    static const ForecastFixture f;
    return f;
}

void bench_simulate(benchmark::State& state) {
    const Model m{reference_model()};
    const int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(m, n, seed++).series);
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void bench_filter_residuals(benchmark::State& state) {
    const Model m{reference_model()};
    const TimeSeries y = reference_series(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(residuals(y, m));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bench_loglik(benchmark::State& state) {
    const Model m{reference_model()};
    const TimeSeries y = reference_series(static_cast<int>(state.range(0)), 13);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_loglik(y, m));
    }
}

void bench_fit_mar(benchmark::State& state) {
    const TimeSeries y = reference_series(277, 21);
    const int starts = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_mar_amle(y, 1, 1, starts));
    }
}

void bench_probability_simulation(benchmark::State& state) {
    const auto& f = fixture();
    const int draws = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lls_probability(f.fit, f.series, f.band, 1,
                                                 LlsSettings{draws, 50, seed++}));
    }
}

void bench_density_grid(benchmark::State& state) {
    const auto& f = fixture();
    const int points = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const DensityEstimate den =
            gj_density_h1(f.fit, f.series, gj_default_grid(f.fit, f.series, points));
        benchmark::DoNotOptimize(density_probability(den, f.band));
    }
}

void bench_importance_resampling(benchmark::State& state) {
    const auto& f = fixture();
    const int paths = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const SirForecast sf =
            sir_forecast(f.fit, f.series, 6, SirSettings{paths, paths / 10, seed++});
        benchmark::DoNotOptimize(probability_in_bounds(sf.weighted, f.band));
    }
}

void bench_roc(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> index(static_cast<size_t>(n));
    std::vector<int> outcomes(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        index[static_cast<size_t>(i)] = unif(rng);
        outcomes[static_cast<size_t>(i)] = unif(rng) < 0.5 ? 1 : 0;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(roc_curve(index, outcomes));
    }
}

BENCHMARK(bench_simulate)->Arg(500)->Unit(benchmark::kMicrosecond);
BENCHMARK(bench_filter_residuals)->Arg(500)->Unit(benchmark::kMicrosecond);
BENCHMARK(bench_loglik)->Arg(500)->Unit(benchmark::kMicrosecond);
BENCHMARK(bench_fit_mar)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_probability_simulation)
    ->Arg(10000)
    ->Arg(100000)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bench_density_grid)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_importance_resampling)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_roc)->Arg(1000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
