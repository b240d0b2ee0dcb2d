#include <benchmark/benchmark.h>

#include <cmath>

#include "fbh/grid.hpp"
#include "fbh/kernels.hpp"
#include "fbh/orlicz.hpp"
#include "fbh/random_field.hpp"
#include "fbh/solver.hpp"
#include "fbh/specfun.hpp"

namespace sf = fbh::specfun;
namespace sv = fbh::solver;

static void MittagLefflerSeries(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(sf::mittag_leffler_neg({0.6, 1.0}, 1.5));
}
BENCHMARK(MittagLefflerSeries);

static void MittagLefflerBranchCut(benchmark::State& state) {
    // mid band: neither the series nor the asymptotic expansion applies
    const double x = std::pow(15.0, 0.6);
    for (auto _ : state)
        benchmark::DoNotOptimize(sf::mittag_leffler_neg({0.6, 1.0}, x));
}
BENCHMARK(MittagLefflerBranchCut);

static void MittagLefflerTable(benchmark::State& state) {
    sf::MittagLeffler ev({0.6, 0.6});
    const double x = std::pow(15.0, 0.6);
    for (auto _ : state) benchmark::DoNotOptimize(ev(x));
}
BENCHMARK(MittagLefflerTable);

static void MWrightMoment(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(sf::mwright_moment(0.5, 1.0, {1e-6, 1e-6, 4000}));
}
BENCHMARK(MWrightMoment);

static void KernelSynthesis1D(benchmark::State& state) {
    auto grid = fbh::make_grid(1, static_cast<int>(state.range(0)), 12.0);
    fbh::kernels::KernelSpec spec;
    spec.alpha = 0.6;
    spec.t = 0.5;
    fbh::kernels::SynthesisOptions opt;
    opt.nyquist_tol = 1e-3;
    for (auto _ : state)
        benchmark::DoNotOptimize(fbh::kernels::synthesize_kernel(spec, grid, opt));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(KernelSynthesis1D)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

static void LuxemburgNorm(benchmark::State& state) {
    auto grid = fbh::make_grid(1, static_cast<int>(state.range(0)), 8.0);
    const fbh::Field f = fbh::random_smooth_field(grid, 1, 0.8, 0.3);
    const fbh::orlicz::OrliczParams op{2.0, 1e-10, 1e12};
    for (auto _ : state)
        benchmark::DoNotOptimize(fbh::orlicz::luxemburg_norm(f, op));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(LuxemburgNorm)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

static void MarchCahnHilliard(benchmark::State& state) {
    auto grid = fbh::make_grid(1, 64, 8.0);
    const fbh::Field u0 = fbh::random_smooth_field(grid, 17, 0.1, 0.3);
    sv::FractionalParams fp;
    fp.alpha = 0.6;
    fp.nonlinearity = sv::CahnHilliard{};
    const auto mesh = sv::TimeMesh::graded(0.25, static_cast<int>(state.range(0)), 0.6);
    sv::MarchOptions opt;
    opt.record_trace = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(sv::march(u0, fp, mesh, opt));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(MarchCahnHilliard)->RangeMultiplier(2)->Range(8, 64)->Complexity();

BENCHMARK_MAIN();
