#include <benchmark/benchmark.h>

#include "gfa/examples.hpp"
#include "gfa/fourier.hpp"

using namespace gfa;

namespace {

void DftMollifier(benchmark::State& state) {
    Family moll = make_mollifier_family();
    FourierPolicy policy;
    policy.estimate_accuracy = false;
    double eps = std::exp2(-8);
    int npts = 1 << static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dft_family(moll, eps, 4.0, npts, policy));
    }
    state.SetComplexityN(npts);
}
BENCHMARK(DftMollifier)->Arg(12)->Arg(14)->Arg(16)->Arg(18)->Complexity();

void PairingOscillatory(benchmark::State& state) {
    Family osc = make_oscillatory_family();
    TestFunction phi = TestFunction::gauss();
    EpsGrid g = EpsGrid::dyadic(4, 10, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairing(osc, phi, g));
    }
}
BENCHMARK(PairingOscillatory);

void PointSpectrum(benchmark::State& state) {
    Family mod = make_modulated_bump_family();
    double eps = std::exp2(-10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fourier_point_eval(mod, eps, std::log(1.0 / eps)));
    }
}
BENCHMARK(PointSpectrum);

}  // namespace

BENCHMARK_MAIN();
