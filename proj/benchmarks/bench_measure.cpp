#include <benchmark/benchmark.h>

#include <cmath>

#include "mdnz/measure.hpp"
#include "mdnz/theory.hpp"

namespace {

void BM_RademacherDensity(benchmark::State& state) {
    const auto rho = mdnz::rademacher_rho_y(2.0);
    double x = 1.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rho.density(x));
        x = 1.1 + 0.7 * std::fmod(x, 1.0);
    }
}
BENCHMARK(BM_RademacherDensity);

void BM_BianeDensity(benchmark::State& state) {
    const auto fc = mdnz::free_convolve_semicircle(
        mdnz::scale_measure(mdnz::rademacher_spectrum(), std::sqrt(2.0)));
    double x = 1.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fc.density.density(x));
        x = 1.1 + 0.7 * std::fmod(x, 1.0);
    }
}
BENCHMARK(BM_BianeDensity);

void BM_BianeConvolveAtoms(benchmark::State& state) {
    const auto m =
        mdnz::scale_measure(mdnz::rademacher_spectrum(), std::sqrt(2.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mdnz::free_convolve_semicircle(m));
    }
}
BENCHMARK(BM_BianeConvolveAtoms);

void BM_HilbertTransform(benchmark::State& state) {
    const auto rho = mdnz::rademacher_rho_y(1.0);
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mdnz::hilbert_transform(rho, x));
        x = 0.2 + 0.9 * std::fmod(x, 1.0);
    }
}
BENCHMARK(BM_HilbertTransform);

void BM_LogEnergy(benchmark::State& state) {
    const auto rho = mdnz::rademacher_rho_y(1.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mdnz::log_energy(rho, 1e-6));
    }
}
BENCHMARK(BM_LogEnergy);

void BM_MmseLinear(benchmark::State& state) {
    const auto rho = mdnz::rademacher_rho_y(1.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mdnz::mmse_linear(rho, 1.5));
    }
}
BENCHMARK(BM_MmseLinear);

}  // namespace
