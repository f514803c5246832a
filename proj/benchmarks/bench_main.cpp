#include "coorbital/action_angle.hpp"
#include "coorbital/freq_analysis.hpp"
#include "coorbital/kepler.hpp"
#include "coorbital/secular.hpp"
#include "coorbital/three_body.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace coorbital;

namespace {

const MassConfig kReference{1.0, 1.0, 0.3, 1e-3, 2.0 * std::numbers::pi};

CartesianState horseshoe_state() {
    const auto c = derive_constants(kReference);
    PoincareState p;
    p.Lambda1 = c.lambda10;
    p.Lambda2 = c.lambda20;
    p.lambda1 = 0.0;
    p.lambda2 = 2.5;
    p.x1 = {1e-3, 0.0};
    p.x2 = {0.0, 2e-3};
    return poincare_to_cartesian(p, c);
}

void BM_KeplerDrift(benchmark::State& state) {
    Vec2 r{1.0, 0.0}, v{0.0, 1.1};
    for (auto _ : state) {
        kepler_drift(r, v, 1.0, 0.01);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_KeplerDrift);

void BM_SplittingStep(benchmark::State& state) {
    const SplittingIntegrator integrator(kReference);
    CartesianState s = horseshoe_state(), carry{};
    for (auto _ : state) {
        integrator.step(s, carry, 1e-3);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_SplittingStep);

void BM_Period(benchmark::State& state) {
    const auto c = derive_constants(kReference);
    const auto mode = state.range(0) == 0 ? QuadratureMode::direct : QuadratureMode::split;
    const double delta = state.range(0) == 0 ? 0.05 : 1e-30;
    for (auto _ : state) benchmark::DoNotOptimize(period(delta, c, kReference, mode));
}
BENCHMARK(BM_Period)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_SecularEigs(benchmark::State& state) {
    const auto c = derive_constants(kReference);
    for (auto _ : state) benchmark::DoNotOptimize(secular_eigs(1e-4, c, kReference));
}
BENCHMARK(BM_SecularEigs)->Unit(benchmark::kMicrosecond);

void BM_MelnikovScan(benchmark::State& state) {
    const long K0 = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(melnikov_min_divisor({0.1913, 6.2832}, {7.1e-3, -1.6e-3}, K0));
}
BENCHMARK(BM_MelnikovScan)->Arg(100)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_FundamentalFrequencies(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<std::complex<double>> s(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 0.1 * static_cast<double>(k);
        s[k] = std::exp(std::complex<double>(0.0, 0.37 * t)) + 0.2 * std::exp(std::complex<double>(0.0, 1.41 * t));
    }
    for (auto _ : state) benchmark::DoNotOptimize(fundamental_frequencies(s, 0.1, 2));
}
BENCHMARK(BM_FundamentalFrequencies)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
