#include <benchmark/benchmark.h>

#include <vector>

#include "inertia/growth_analysis.hpp"
#include "inertia/inertial_model.hpp"
#include "inertia/random.hpp"
#include "inertia/stats_kernel.hpp"

namespace {

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed) {
    inertia::Rng rng(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.normal();
    return xs;
}

}  // namespace

static void BM_OlsFit(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto ys = normal_sample(n, 1);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = 1950.0 + static_cast<double>(i);
    for (auto _ : state) benchmark::DoNotOptimize(inertia::stats::ols_fit(xs, ys));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OlsFit)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_StudentTail(benchmark::State& state) {
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(inertia::stats::student_t_sf_two_sided(t, 59));
        t = t > 6.0 ? 0.1 : t + 0.37;
    }
}
BENCHMARK(BM_StudentTail);

static void BM_NormalQuantile(benchmark::State& state) {
    double p = 1e-6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(inertia::stats::normal_quantile(p));
        p = p > 0.999 ? 1e-6 : p + 0.0123;
    }
}
BENCHMARK(BM_NormalQuantile);

static void BM_ShapiroFrancia(benchmark::State& state) {
    const auto xs = normal_sample(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(inertia::stats::shapiro_francia(xs));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ShapiroFrancia)->Arg(61)->Arg(793)->Arg(5000)->Complexity();

static void BM_SimulateAndRecover(benchmark::State& state) {
    const inertia::ModelParams params{300.0, 5000.0, 1950, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(inertia::run_recovery(params, 250.0, 61, static_cast<int>(state.range(0)), 1));
    }
}
BENCHMARK(BM_SimulateAndRecover)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
