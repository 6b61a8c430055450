#include <benchmark/benchmark.h>

#include "jcw/jc_evolution.hpp"

namespace {

void BM_EvolveBranches(benchmark::State& state) {
    int nmax = static_cast<int>(state.range(0));
    auto field = jcw::make_coherent({2.0, 0.0}, nmax, 1e-3);
    jcw::ModelParams params;
    params.gt = 5.0;
    for (auto _ : state) {
        auto ev = jcw::evolve_branches(field, jcw::AtomPrep{}, params);
        benchmark::DoNotOptimize(ev.rho_f);
    }
    state.SetComplexityN(nmax);
}
BENCHMARK(BM_EvolveBranches)->Arg(16)->Arg(32)->Arg(64)->Complexity(benchmark::oNSquared);

void BM_DiagonalFastPath(benchmark::State& state) {
    int nmax = static_cast<int>(state.range(0));
    auto field = jcw::make_thermal(2.0, nmax);
    jcw::ModelParams params;
    params.gt = 5.0;
    for (auto _ : state) {
        auto ev = jcw::evolve_field_diagonal(field, jcw::AtomPrep{}, params);
        benchmark::DoNotOptimize(ev.rho_f);
    }
}
BENCHMARK(BM_DiagonalFastPath)->Arg(64)->Arg(256);

void BM_InversionSeries(benchmark::State& state) {
    auto field = jcw::make_coherent({1.0, 0.0}, 16);
    std::vector<double> times;
    for (int i = 0; i <= 1200; ++i) times.push_back(i * 0.01);
    for (auto _ : state) {
        auto series = jcw::inversion_series(field, jcw::AtomPrep{}, {}, times);
        benchmark::DoNotOptimize(series);
    }
}
BENCHMARK(BM_InversionSeries);

}  // namespace
