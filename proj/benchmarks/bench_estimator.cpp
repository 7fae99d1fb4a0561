#include <benchmark/benchmark.h>

#include "mdnz/amp.hpp"
#include "mdnz/ensemble.hpp"
#include "mdnz/estimator.hpp"

namespace {

void BM_SampleGoe(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mdnz::sample_goe(n, seed++));
    }
}
BENCHMARK(BM_SampleGoe)->Arg(256)->Arg(512);

void BM_Eigendecomposition(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const auto y = mdnz::sample_goe(n, seed++);
        benchmark::DoNotOptimize(y.eigen().values.sum());
    }
}
BENCHMARK(BM_Eigendecomposition)->Arg(256)->Arg(512);

void BM_RieSublinear(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto s =
        mdnz::sample_rot_inv_signal(n, std::vector<double>(16, 1.0), 3);
    const auto y = mdnz::observe(s, 3.0, mdnz::NoiseSpec::wigner(), 4);
    y.eigen();  // decomposition cached outside the loop
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            mdnz::rie_sublinear(y, 3.0, mdnz::NoiseSpec::wigner()));
    }
}
BENCHMARK(BM_RieSublinear)->Arg(256)->Arg(512);

void BM_RieLinearEmpirical(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<double> pm(n);
    for (int i = 0; i < n; ++i) pm[i] = i < n / 2 ? -1.0 : 1.0;
    const auto s = mdnz::sample_rot_inv_signal(n, pm, 5);
    const auto y = mdnz::observe(s, 1.0, mdnz::NoiseSpec::wigner(), 6);
    y.eigen();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            mdnz::rie_linear(y, 1.0, mdnz::HilbertMode::empirical));
    }
}
BENCHMARK(BM_RieLinearEmpirical)->Arg(256)->Arg(512);

void BM_AmpRankOne(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto fs =
        mdnz::sample_factor_signal(n, 1, mdnz::ScalarPrior::gaussian(), 7);
    const auto y = mdnz::observe(fs.s, 4.0, mdnz::NoiseSpec::wigner(), 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            mdnz::amp_rank_one(y, 4.0, mdnz::ScalarPrior::gaussian(), {}));
    }
}
BENCHMARK(BM_AmpRankOne)->Arg(256)->Arg(512);

}  // namespace
