#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "ringlens/ensemble.hpp"
#include "ringlens/fft.hpp"
#include "ringlens/gpe.hpp"
#include "ringlens/rng.hpp"
#include "ringlens/taap.hpp"

using namespace ringlens;

namespace {
const PhysicalConstants kC;
constexpr double kR = 485e-6;
}  // namespace

static void BM_Fft(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Fft fft(n);
    NormalSampler normal(1);
    std::vector<std::complex<double>> data(n);
    for (auto& v : data) v = {normal(), normal()};
    for (auto _ : state) {
        fft.forward(data.data());
        fft.inverse(data.data());
        benchmark::DoNotOptimize(data.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Fft)->Arg(1024)->Arg(2048)->Arg(4096);

static void BM_TaapPotential(benchmark::State& state) {
    TaapConfig taap;
    double phi = 0.0;
    for (auto _ : state) {
        phi += 0.01;
        benchmark::DoNotOptimize(taap::taap_potential(
            {2e-4 * std::cos(phi), 2e-4 * std::sin(phi), 1e-5}, taap, kC));
    }
}
BENCHMARK(BM_TaapPotential);

static void BM_EnsembleLensStep(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    auto ens = ens::sample_thermal(116e-9, 42.4, 0.0, n, kR, kC, 2);
    const auto pot = StagePotential::tilt_lens(0.07, 0.0, 63.9, 0.0, kR, kC);
    double t = 0.0;
    for (auto _ : state) {
        ens::step(ens, pot, t, 1e-4, 1e-5, kC);  // ten leapfrog steps
        t += 1e-4;
    }
    state.SetItemsProcessed(state.iterations() * n * 10);
}
BENCHMARK(BM_EnsembleLensStep)->Arg(10000)->Arg(100000);

static void BM_GpeEvolveStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    gpe::WaveFunction psi;
    psi.ring_radius = kR;
    psi.atom_number = 1e4;
    psi.amplitude.resize(n);
    for (int j = 0; j < n; ++j) {
        const double u = StagePotential::wrap_pi(two_pi * j / n);
        psi.amplitude[j] = std::exp(-u * u / (4.0 * 0.01 * 0.01));
    }
    psi.normalize();
    const auto pot = StagePotential::tilt_lens(0.07, 0.0, 63.9, 0.0, kR, kC);
    const double g1d = gpe::effective_g1d(two_pi * 100.0, kC);
    double t = 0.0;
    for (auto _ : state) {
        gpe::evolve(psi, pot, t, 1e-4, 1e-5, g1d, kC);  // ten split steps
        t += 1e-4;
    }
    state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_GpeEvolveStep)->Arg(1024)->Arg(2048);

BENCHMARK_MAIN();
