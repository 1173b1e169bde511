#include <benchmark/benchmark.h>

#include <random>

#include "rmdp/tv_ball.hpp"

namespace {

rmdp::Vector random_simplex(std::mt19937_64& rng, int n) {
    std::exponential_distribution<double> e(1.0);
    rmdp::Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = e(rng);
    return v / v.sum();
}

void BM_Partition(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const rmdp::Vector l = random_simplex(rng, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::partition_support(l));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Partition)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_WaterfillRow(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const int n = static_cast<int>(state.range(0));
    const rmdp::Vector mu = random_simplex(rng, n);
    const auto part = rmdp::partition_support(random_simplex(rng, n));
    for (auto _ : state) benchmark::DoNotOptimize(rmdp::waterfill_row(mu, part, 0.7));
    state.SetComplexityN(n);
}
BENCHMARK(BM_WaterfillRow)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

}  // namespace
