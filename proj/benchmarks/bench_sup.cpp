#include <benchmark/benchmark.h>

#include "gfa/examples.hpp"
#include "gfa/region.hpp"

using namespace gfa;

namespace {

void SupBallMollifier(benchmark::State& state) {
    Family moll = make_mollifier_family();
    SampleParams sp;
    sp.base_points = static_cast<int>(state.range(0));
    double eps = std::exp2(-12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sup_on_region(moll, {1}, eps, RegionSpec::ball(2), sp));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(SupBallMollifier)->Arg(257)->Arg(1025)->Arg(4097)->Complexity();

void SupExteriorStrictGrowth(benchmark::State& state) {
    Family p34 = make_prop34_family(2);
    SampleParams sp;
    sp.base_points = 1025;
    double eps = std::exp2(-12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sup_on_region(p34, {0}, eps, RegionSpec::exterior(2, 4.0), sp));
    }
}
BENCHMARK(SupExteriorStrictGrowth);

void DoubleSequenceEval(benchmark::State& state) {
    Example510 ex = make_example_510({});
    double eps = Example510::eps_of(3, 12);
    double w = std::exp(4.0 * std::log(eps));
    int i = 0;
    for (auto _ : state) {
        double off = w * ((i % 200) - 100) / 100.0;
        benchmark::DoNotOptimize(ex.family().deriv_at({5}, eps, 2, off));
        ++i;
    }
}
BENCHMARK(DoubleSequenceEval);

}  // namespace

BENCHMARK_MAIN();
