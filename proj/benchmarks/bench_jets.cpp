#include <benchmark/benchmark.h>

#include "plap/expr.hpp"
#include "plap/jet.hpp"

using namespace plap::jets;

static void BM_JetMultiply(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    const Jet a = 1.0 + Jet::variable(3, order, 0, 0.3) * Jet::variable(3, order, 1, -0.2);
    const Jet b = exp(Jet::variable(3, order, 2, 0.1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(a * b);
    }
}
BENCHMARK(BM_JetMultiply)->DenseRange(2, 12, 2);

static void BM_JetDivide(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    const Jet a = sin(Jet::variable(3, order, 0, 0.3));
    const Jet b = 2.0 + cos(Jet::variable(3, order, 1, 0.1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(a / b);
    }
}
BENCHMARK(BM_JetDivide)->DenseRange(2, 12, 2);

static void BM_ExprEval(benchmark::State& state) {
    const auto e = parse_expr("exp(0.2*x1)*sqrt(2+x2)^3/(1+x3^2) - log(3-x1)");
    const double at[3] = {0.25, -0.5, 1.5};
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_jet(e, at, order));
    }
}
BENCHMARK(BM_ExprEval)->Arg(0)->Arg(4)->Arg(8);
