#include <benchmark/benchmark.h>

#include "lcgf/field.hpp"
#include "lcgf/variational.hpp"
#include "lcgf/wick.hpp"

using namespace lcgf;

static void BM_PointVariance(benchmark::State& state) {
    const int N = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(point_variance(LatticeSpec::make(2, N)));
}
BENCHMARK(BM_PointVariance)->Arg(64)->Arg(256);

static void BM_NormalDraws(benchmark::State& state) {
    RngKey key = derive_key(1, 2);
    std::uint64_t i = 0;
    double acc = 0;
    for (auto _ : state) {
        NormalPair z = normal_pair(key, i++, 42);
        acc += z.z0 + z.z1;
    }
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(int64_t(state.iterations()) * 2);
}
BENCHMARK(BM_NormalDraws);

static void BM_SampleField(benchmark::State& state) {
    const int N = int(state.range(0));
    LatticePtr lat = make_lattice(2, N);
    GaussLaw law = GaussLaw::log_correlated();
    RngKey key = derive_key(3, 4);
    std::uint32_t s = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample(law, lat, key, s++));
}
BENCHMARK(BM_SampleField)->Arg(32)->Arg(128);

static void BM_RealSynthesis(benchmark::State& state) {
    const int N = int(state.range(0));
    LatticePtr lat = make_lattice(2, N);
    SpectralField u = sample(GaussLaw::log_correlated(), lat, derive_key(5, 6), 0);
    for (auto _ : state) benchmark::DoNotOptimize(to_real_grid(u));
}
BENCHMARK(BM_RealSynthesis)->Arg(32)->Arg(64)->Arg(128);

static void BM_WickQuartic(benchmark::State& state) {
    const int N = int(state.range(0));
    LatticePtr lat = make_lattice(2, N);
    GaussLaw law = GaussLaw::log_correlated();
    WickContext ctx = WickContext::for_law(law, *lat);
    SpectralField u = sample(law, lat, derive_key(7, 8), 0);
    for (auto _ : state) benchmark::DoNotOptimize(wick_potential(u, 1.0, 4, ctx));
}
BENCHMARK(BM_WickQuartic)->Arg(32)->Arg(64);

static void BM_TerminalSampler(benchmark::State& state) {
    const int M = int(state.range(0));
    VariationalContext ctx(2, M, 2 * M);
    RngKey key = derive_key(9, 10);
    std::uint32_t s = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ctx.sample_terminals(key, s++));
}
BENCHMARK(BM_TerminalSampler)->Arg(16)->Arg(64);

static void BM_QuarticObjective(benchmark::State& state) {
    const int M = int(state.range(0));
    VariationalContext ctx(2, M, 2 * M);
    const double sigma_n = point_variance(ctx.lattice()->spec());
    const double cost = ctx.expected_drift_cost();
    RngKey key = derive_key(11, 12);
    std::uint32_t s = 0;
    for (auto _ : state) {
        DriftEnsemble e = ctx.sample_terminals(key, s++);
        benchmark::DoNotOptimize(objective_quartic(ctx, e, cost, 5.0, 1e9, 1.0, sigma_n));
    }
}
BENCHMARK(BM_QuarticObjective)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
