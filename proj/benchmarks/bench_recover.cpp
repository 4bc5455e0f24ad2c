#include <benchmark/benchmark.h>

#include "plap/recover.hpp"

using namespace plap;

static void BM_RecoverAll(benchmark::State& state) {
    recover::Scenario sc;
    sc.profile = "exp(0.2*x1)";
    sc.p = 3.0;
    sc.zeta = Vec(3);
    sc.zeta << 0.6, 0.48, 0.64;
    sc.z = Vec::Zero(3);
    sc.order = static_cast<int>(state.range(0));
    const auto oracle = recover::oracle_tilted_profile(sc);
    const auto bj = recover::synthesize_measurements(oracle.gamma, oracle.u, sc.p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(recover::recover_all(bj));
    }
}
BENCHMARK(BM_RecoverAll)->DenseRange(2, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_ThetaDeterminant(benchmark::State& state) {
    Vec g(3);
    g << 0.6, 0.8, 0.0;
    double p = 1.01;
    for (auto _ : state) {
        p = p > 9.9 ? 1.01 : p + 0.01;
        benchmark::DoNotOptimize(recover::theta_det_direct(recover::theta_matrix(1.0, g, p, 2)));
    }
}
BENCHMARK(BM_ThetaDeterminant);
