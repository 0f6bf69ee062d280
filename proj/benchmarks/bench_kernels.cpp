// Serial reference vs. OpenMP kernels on a synthetic trace.

#include "lpsim/kernels.hpp"
#include "lpsim/strategy.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace lpsim;

namespace {

const PoolParams kPool{1.01, 0.003};

std::vector<MarketStep> synthetic_trace(std::size_t steps) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rho(-60.0, 60.0);
    std::uniform_real_distribution<double> volume(0.0, 400.0);
    std::vector<MarketStep> trace(steps);
    for (auto& step : trace)
        step = {rho(rng), volume(rng)};
    return trace;
}

std::vector<Controller> grid(int n) { return integer_grid(n); }

void reward_matrix_serial_bench(benchmark::State& state) {
    const auto trace = synthetic_trace(2048);
    const auto experts = grid(348);
    for (auto _ : state) {
        auto matrix = kernels::reward_matrix_serial(trace, kPool, experts);
        benchmark::DoNotOptimize(matrix.data());
    }
    state.SetItemsProcessed(state.iterations() * 2048 * 348);
}
BENCHMARK(reward_matrix_serial_bench)->Unit(benchmark::kMillisecond);

void reward_matrix_parallel_bench(benchmark::State& state) {
    const auto trace = synthetic_trace(2048);
    const auto experts = grid(348);
    for (auto _ : state) {
        auto matrix = kernels::reward_matrix(trace, kPool, experts);
        benchmark::DoNotOptimize(matrix.data());
    }
    state.SetItemsProcessed(state.iterations() * 2048 * 348);
}
BENCHMARK(reward_matrix_parallel_bench)->Unit(benchmark::kMillisecond);

void static_totals_serial_bench(benchmark::State& state) {
    const auto trace = synthetic_trace(8192);
    const auto experts = grid(128);
    for (auto _ : state) {
        auto totals = kernels::static_totals_serial(trace, kPool, experts);
        benchmark::DoNotOptimize(totals.data());
    }
    state.SetItemsProcessed(state.iterations() * 8192 * 128);
}
BENCHMARK(static_totals_serial_bench)->Unit(benchmark::kMillisecond);

void static_totals_parallel_bench(benchmark::State& state) {
    const auto trace = synthetic_trace(8192);
    const auto experts = grid(128);
    for (auto _ : state) {
        auto totals = kernels::static_totals(trace, kPool, experts);
        benchmark::DoNotOptimize(totals.data());
    }
    state.SetItemsProcessed(state.iterations() * 8192 * 128);
}
BENCHMARK(static_totals_parallel_bench)->Unit(benchmark::kMillisecond);

void run_ewa_serial_bench(benchmark::State& state) {
    const auto trace = synthetic_trace(4096);
    EwaRunOptions options;
    options.parallel = false;
    options.record_distributions = false;
    for (auto _ : state) {
        auto run = run_ewa(trace, kPool, EwaParams{348, 0.002}, options);
        benchmark::DoNotOptimize(run.wealth_log);
    }
}
BENCHMARK(run_ewa_serial_bench)->Unit(benchmark::kMillisecond);

void run_ewa_parallel_bench(benchmark::State& state) {
    const auto trace = synthetic_trace(4096);
    EwaRunOptions options;
    options.record_distributions = false;
    for (auto _ : state) {
        auto run = run_ewa(trace, kPool, EwaParams{348, 0.002}, options);
        benchmark::DoNotOptimize(run.wealth_log);
    }
}
BENCHMARK(run_ewa_parallel_bench)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
