#include <benchmark/benchmark.h>

#include "uloc/fourier.hpp"
#include "uloc/hermite.hpp"
#include "uloc/localization.hpp"

using namespace uloc;

static void BM_ForwardTransform1D(benchmark::State& state)
{
    const GridSpec g = GridSpec::line(static_cast<std::size_t>(state.range(0)), -16.0, 16.0);
    SampledFunction f = SampledFunction::fromFunction(g, Domain::Time, [](const Point& x) {
        return cplx(std::exp(-x[0] * x[0]), 0.0);
    });
    for (auto _ : state) {
        SampledFunction F = fourier_transform(f);
        benchmark::DoNotOptimize(F.samples().data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ForwardTransform1D)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_ForwardTransform2D(benchmark::State& state)
{
    const GridSpec g = GridSpec::square(static_cast<std::size_t>(state.range(0)), -16.0, 16.0);
    SampledFunction f = SampledFunction::fromFunction(g, Domain::Time, [](const Point& x) {
        return cplx(std::exp(-x[0] * x[0] - x[1] * x[1]), 0.0);
    });
    for (auto _ : state) {
        SampledFunction F = fourier_transform(f);
        benchmark::DoNotOptimize(F.samples().data());
    }
}
BENCHMARK(BM_ForwardTransform2D)->Arg(64)->Arg(128)->Arg(256);

static void BM_HermiteBatch(benchmark::State& state)
{
    const GridSpec g = GridSpec::line(2048, -16.0, 16.0);
    std::vector<double> pts(g.size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = g.coord(0, i);
    for (auto _ : state) {
        auto table = hermite_table(static_cast<int>(state.range(0)), pts);
        benchmark::DoNotOptimize(table.data());
    }
}
BENCHMARK(BM_HermiteBatch)->Arg(8)->Arg(32)->Arg(64);

static void BM_InnerProduct(benchmark::State& state)
{
    const GridSpec g = GridSpec::line(static_cast<std::size_t>(state.range(0)), -16.0, 16.0);
    SampledFunction f = SampledFunction::fromFunction(g, Domain::Time, [](const Point& x) {
        return cplx(std::cos(x[0]), std::sin(2.0 * x[0]));
    });
    for (auto _ : state) {
        cplx v = inner_product(f, f);
        benchmark::DoNotOptimize(v);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InnerProduct)->RangeMultiplier(8)->Range(512, 262144)->Complexity();

static void BM_MaterializeQ(benchmark::State& state)
{
    const GridSpec g = GridSpec::line(static_cast<std::size_t>(state.range(0)), -16.0, 16.0);
    for (auto _ : state) {
        LocalizationSetup setup(g, MeasurableSet::box({-2, 0}, {2, 0}),
                                MeasurableSet::box({-2, 0}, {2, 0}));
        materialize_Q(setup);
        benchmark::DoNotOptimize(setup.Q->data());
    }
}
BENCHMARK(BM_MaterializeQ)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
