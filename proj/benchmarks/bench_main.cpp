#include <benchmark/benchmark.h>

#include <numbers>

#include "leakynet/coupling.hpp"
#include "leakynet/engine.hpp"
#include "leakynet/experiments.hpp"
#include "leakynet/oracle.hpp"
#include "leakynet/sets.hpp"

using namespace leakynet;

static void BM_ProcessStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const ModelSpec spec{static_cast<int>(n), LeakKind::reset, std::numbers::e};
    RngStream rng(1, 0);
    Process p(ladder(n), spec, true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.step(rng));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ProcessStep)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

static void BM_ExtinctionN4(benchmark::State& state) {
    const ModelSpec spec{4, LeakKind::reset, std::numbers::e};
    std::uint64_t i = 0;
    std::uint64_t jumps = 0;
    for (auto _ : state) {
        RngStream rng = derive_stream(3, i++);
        const auto s = simulate(ladder(4), spec, SimulationOptions{}, rng);
        jumps += s.jumps;
        benchmark::DoNotOptimize(s.tau);
    }
    state.counters["jumps/run"] = benchmark::Counter(static_cast<double>(jumps) / static_cast<double>(state.iterations()));
}
BENCHMARK(BM_ExtinctionN4);

static void BM_Classify(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RngStream rng(2, 0);
    const PotentialList u = sample_s0(n, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify(u));
    }
}
BENCHMARK(BM_Classify)->Arg(16)->Arg(64);

static void BM_CoupledUntilResolved(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const ModelSpec spec{static_cast<int>(n), LeakKind::reset, std::numbers::e};
    std::uint64_t i = 0;
    for (auto _ : state) {
        RngStream rng = derive_stream(4, i++);
        const PotentialList u = draw_w_list(n, rng), v = draw_w_list(n, rng);
        benchmark::DoNotOptimize(
            simulate_coupled(u, v, spec, RateConvention::marginal_preserving, CouplingStop{}, rng));
    }
}
BENCHMARK(BM_CoupledUntilResolved)->Arg(9)->Arg(16);

static void BM_OracleMean(benchmark::State& state) {
    const ModelSpec spec{3, LeakKind::reset, std::numbers::e};
    const int cap = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mean_absorption(build_oracle(spec, cap), ladder(3)));
    }
}
BENCHMARK(BM_OracleMean)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_OracleSurvival(benchmark::State& state) {
    const ModelSpec spec{3, LeakKind::reset, std::numbers::e};
    const OracleModel model = build_oracle(spec, 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(survival(model, ladder(3), 1.0));
    }
}
BENCHMARK(BM_OracleSurvival)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
