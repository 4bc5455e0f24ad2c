#include <benchmark/benchmark.h>

#include <array>
#include <cmath>

#include "plap/psolve.hpp"

using namespace plap;

static void BM_SolvePLaplace2D(benchmark::State& state) {
    const int res = static_cast<int>(state.range(0));
    const double p = static_cast<double>(state.range(1)) / 10.0;
    const std::array<double, 2> ext{1.0, 1.0};
    const std::array<int, 2> r{res, res};
    const auto d = grid::build_domain(ext, r);
    const grid::WeightField g(grid::sample(d, [](const Vec& x) { return 1.0 + 0.3 * x[0] * x[1]; }));
    const auto f = grid::sample_boundary(d, [](const Vec& x) { return x[0] + std::sin(x[1]); });
    for (auto _ : state) {
        benchmark::DoNotOptimize(psolve::solve_p_laplace(g, p, f));
    }
}
BENCHMARK(BM_SolvePLaplace2D)
    ->Args({17, 15})
    ->Args({33, 15})
    ->Args({65, 15})
    ->Args({17, 30})
    ->Args({33, 30})
    ->Args({65, 30})
    ->Unit(benchmark::kMillisecond);

static void BM_SolvePLaplace3D(benchmark::State& state) {
    const int res = static_cast<int>(state.range(0));
    const std::array<double, 3> ext{1.0, 1.0, 1.0};
    const std::array<int, 3> r{res, res, res};
    const auto d = grid::build_domain(ext, r);
    const grid::WeightField g(grid::sample(d, [](const Vec& x) { return 1.0 + 0.2 * x[2]; }));
    const auto f = grid::sample_boundary(d, [](const Vec& x) { return x[0] + 0.5 * x[1] * x[2]; });
    for (auto _ : state) {
        benchmark::DoNotOptimize(psolve::solve_p_laplace(g, 3.0, f));
    }
}
BENCHMARK(BM_SolvePLaplace3D)->Arg(9)->Arg(17)->Unit(benchmark::kMillisecond);
