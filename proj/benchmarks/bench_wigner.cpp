#include <benchmark/benchmark.h>

#include "jcw/wigner.hpp"

namespace {

void BM_WignerPoint(benchmark::State& state) {
    int nmax = static_cast<int>(state.range(0));
    auto field = jcw::make_coherent({2.0, 0.0}, nmax, 1e-3);
    const auto& rho = field.matrix();
    jcw::Complex alpha{1.3, -0.7};
    for (auto _ : state) {
        benchmark::DoNotOptimize(jcw::wigner_point(rho, alpha));
    }
    state.SetComplexityN(nmax);
}
BENCHMARK(BM_WignerPoint)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Complexity();

void BM_WignerGridSerial(benchmark::State& state) {
    auto field = jcw::make_coherent({1.0, 0.0}, 16);
    jcw::GridSpec spec;
    spec.half_width = 4.0;
    spec.step = 0.1;
    for (auto _ : state) {
        auto grid = jcw::wigner_grid(field.matrix(), spec, /*serial=*/true);
        benchmark::DoNotOptimize(grid.values);
    }
}
BENCHMARK(BM_WignerGridSerial)->Unit(benchmark::kMillisecond);

void BM_WignerGridParallel(benchmark::State& state) {
    auto field = jcw::make_coherent({1.0, 0.0}, 16);
    jcw::GridSpec spec;
    spec.half_width = 4.0;
    spec.step = 0.1;
    for (auto _ : state) {
        auto grid = jcw::wigner_grid(field.matrix(), spec);
        benchmark::DoNotOptimize(grid.values);
    }
}
BENCHMARK(BM_WignerGridParallel)->Unit(benchmark::kMillisecond);

}  // namespace
