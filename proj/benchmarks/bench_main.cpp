#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "nivsum/decompose.hpp"
#include "nivsum/rangelab.hpp"

namespace {

using namespace nivsum;

DigitString random_digits(uint64_t seed, uint32_t g, std::size_t len) {
    std::mt19937_64 rng(seed);
    std::vector<uint32_t> d(len);
    for (auto& x : d) x = rng() % g;
    d.back() = 1 + rng() % (g - 1);
    return DigitString(g, d);
}

void bm_niven_sieve(benchmark::State& state) {
    const auto n = static_cast<uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(niven_sieve(n, 10));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(bm_niven_sieve)->Arg(100000)->Arg(1000000);

void bm_s2_scan(benchmark::State& state) {
    const auto n = random_digits(7, 2, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(s2_scan(n));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(bm_s2_scan)->Arg(2000)->Arg(12000);

void bm_mod_eval(benchmark::State& state) {
    const auto n = random_digits(11, 10, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(mod_eval(n, 1000003));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(bm_mod_eval)->Arg(2000)->Arg(12000);

void bm_subset_sum(benchmark::State& state) {
    std::mt19937_64 rng(13);
    const uint32_t p = 1123;
    std::vector<uint32_t> set;
    for (uint32_t i = 1; set.size() < 400; ++i)
        if (rng() % 3 == 0) set.push_back(i % p);
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (auto _ : state)
        benchmark::DoNotOptimize(h_subset_sum(set, 12, 917, p));
}
BENCHMARK(bm_subset_sum);

void bm_decompose(benchmark::State& state) {
    const auto n = sample_s_class({420, 37, 2}, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(decompose(n));
}
BENCHMARK(bm_decompose)->Arg(2000)->Arg(12000)->Unit(benchmark::kMillisecond);

void bm_verify_certificate(benchmark::State& state) {
    const auto n = sample_s_class({420, 37, 2}, 12000, 1);
    const auto cert = decompose(n);
    for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(cert));
}
BENCHMARK(bm_verify_certificate)->Unit(benchmark::kMillisecond);

void bm_verify_range(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_range(static_cast<uint64_t>(state.range(0)), 10, 2,
                                              MemberKind::niven, {1}));
}
BENCHMARK(bm_verify_range)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
