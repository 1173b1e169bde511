#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "rmdp/policy_iteration.hpp"
#include "rmdp/robustness.hpp"

namespace {

rmdp::McmModel random_model(int n, int k, double radius, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> e(1.0);
    std::uniform_real_distribution<double> c(0.0, 5.0);
    rmdp::McmModel m;
    for (int i = 0; i < n; ++i) m.states.push_back("s" + std::to_string(i + 1));
    for (int u = 0; u < k; ++u) m.controls.push_back("u" + std::to_string(u + 1));
    m.feasible.assign(n, {});
    for (int x = 0; x < n; ++x)
        for (int u = 0; u < k; ++u) m.feasible[x].push_back(u);
    for (int u = 0; u < k; ++u) {
        rmdp::Matrix P(n, n);
        for (int x = 0; x < n; ++x) {
            for (int z = 0; z < n; ++z) P(x, z) = e(rng);
            P.row(x) /= P.row(x).sum();
        }
        m.nominal.push_back(P);
    }
    m.cost.resize(n, k);
    for (int x = 0; x < n; ++x)
        for (int u = 0; u < k; ++u) m.cost(x, u) = c(rng);
    m.radius = radius;
    return m;
}

void BM_PolicyIterationUnichain(benchmark::State& state) {
    const auto m = random_model(static_cast<int>(state.range(0)), 3, 0.1, 7);
    const auto g0 = rmdp::first_feasible_policy(m);
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::policy_iteration_unichain(m, g0));
}
BENCHMARK(BM_PolicyIterationUnichain)->Arg(3)->Arg(10)->Arg(30)->Arg(100);

void BM_PolicyIterationGeneral(benchmark::State& state) {
    const auto m = random_model(static_cast<int>(state.range(0)), 3, 0.1, 7);
    const auto g0 = rmdp::first_feasible_policy(m);
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::policy_iteration_general(m, g0));
}
BENCHMARK(BM_PolicyIterationGeneral)->Arg(3)->Arg(10)->Arg(30)->Arg(100);

void BM_Rmax(benchmark::State& state) {
    const auto m = random_model(static_cast<int>(state.range(0)), 2, 0.1, 11);
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::compute_rmax(m));
}
BENCHMARK(BM_Rmax)->Arg(3)->Arg(6)->Arg(9);

}  // namespace
