// Serial reference vs OpenMP kernels on random dense instances.
//
//   ./build/bench/crowdctl_bench --benchmark_filter=Selection

#include <benchmark/benchmark.h>

#include <random>

#include "crowdctl/evaluation.hpp"
#include "crowdctl/oracle.hpp"
#include "crowdctl/selector.hpp"
#include "crowdctl/simulator.hpp"

namespace {

using namespace crowdctl;

Pmf random_pmf(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Pmf p(n);
    double sum = 0.0;
    for (double& v : p) sum += (v = u(rng));
    for (double& v : p) v /= sum;
    return p;
}

Scenario random_scenario(std::size_t n, std::size_t sources, std::size_t horizon) {
    std::mt19937_64 rng(n * 1000 + sources * 10 + horizon);
    auto kernels = [&] {
        BehaviorSequence seq(horizon, TransitionKernel(n, n));
        for (auto& k : seq)
            for (std::size_t x = 0; x < n; ++x) {
                const auto row = random_pmf(rng, n);
                std::copy(row.begin(), row.end(), k.row(x).begin());
            }
        return seq;
    };
    Scenario s;
    s.space.size = n;
    s.horizon = horizon;
    s.initial = random_pmf(rng, n);
    s.target = kernels();
    s.reward = RewardSchedule(horizon, n);
    std::uniform_real_distribution<double> r(-1.0, 1.0);
    for (double& v : s.reward.data()) v = r(rng);
    for (std::size_t i = 0; i < sources; ++i) s.sources.push_back({kernels(), std::nullopt, std::nullopt});
    return s;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "omp"); }

void BM_Selection(benchmark::State& state) {
    const auto s = random_scenario(static_cast<std::size_t>(state.range(0)), 8, 20);
    for (auto _ : state) benchmark::DoNotOptimize(solve_selection(s, exec_of(state)));
    label(state);
}

void BM_Oracle(benchmark::State& state) {
    const auto s = random_scenario(static_cast<std::size_t>(state.range(0)), 1, 20);
    for (auto _ : state) benchmark::DoNotOptimize(solve_oracle(s.target, s.reward, s.initial, exec_of(state)));
    label(state);
}

void BM_Cost(benchmark::State& state) {
    const auto s = random_scenario(static_cast<std::size_t>(state.range(0)), 1, 20);
    for (auto _ : state) benchmark::DoNotOptimize(cost(s, s.sources[0].kernels, exec_of(state)));
    label(state);
}

void BM_Rollouts(benchmark::State& state) {
    const auto s = random_scenario(static_cast<std::size_t>(state.range(0)), 1, 20);
    for (auto _ : state) benchmark::DoNotOptimize(sample_rollouts(s.initial, s.target, 20000, 1, exec_of(state)));
    label(state);
}

void BM_BruteForce(benchmark::State& state) {
    const auto s = random_scenario(static_cast<std::size_t>(state.range(0)), 2, 6);
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_policy_search(s, exec_of(state)));
    label(state);
}

} // namespace

BENCHMARK(BM_Selection)->ArgsProduct({{25, 100, 400}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->ArgsProduct({{25, 100, 400}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cost)->ArgsProduct({{25, 100, 400}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rollouts)->ArgsProduct({{25, 100}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForce)->ArgsProduct({{2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
