#include <benchmark/benchmark.h>

#include <random>

#include "gfa/scalar.hpp"

using namespace gfa;

namespace {

std::vector<ExactScalar> random_scalars(int n, int terms) {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> sixteenths(-48, 48);
    std::uniform_int_distribution<int> logs(-2, 2);
    std::uniform_real_distribution<double> coeff(0.5, 2.0);
    std::vector<ExactScalar> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        std::vector<Term> ts;
        for (int t = 0; t < terms; ++t) {
            ts.emplace_back(Complex(coeff(rng), 0.0), sixteenths(rng) / 16.0, logs(rng));
        }
        out.push_back(ExactScalar::normalize(std::move(ts)));
    }
    return out;
}

void RingMul(benchmark::State& state) {
    auto scalars = random_scalars(256, static_cast<int>(state.range(0)));
    size_t i = 0;
    for (auto _ : state) {
        const ExactScalar& a = scalars[i % scalars.size()];
        const ExactScalar& b = scalars[(i + 7) % scalars.size()];
        benchmark::DoNotOptimize(a * b);
        ++i;
    }
}
BENCHMARK(RingMul)->Arg(2)->Arg(4)->Arg(8);

void Valuation(benchmark::State& state) {
    auto scalars = random_scalars(256, 4);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(valuation(scalars[i % scalars.size()]));
        ++i;
    }
}
BENCHMARK(Valuation);

void FitExponent(benchmark::State& state) {
    EpsGrid g = EpsGrid::dyadic();
    SampledScalar s = SampledScalar::from_exact(
        ExactScalar::monomial(Complex(3.0, 0.0), 2.0, 1), g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_exponent(s));
    }
}
BENCHMARK(FitExponent);

}  // namespace

BENCHMARK_MAIN();
