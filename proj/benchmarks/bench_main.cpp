#include <benchmark/benchmark.h>

#include <array>

#include "mvlab/calculus.hpp"
#include "mvlab/integrate.hpp"
#include "mvlab/mvp.hpp"
#include "mvlab/mvroot.hpp"

using namespace mvlab;

namespace {

void BM_Parse(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parse("sin(x)*exp(-x^2/2) + log(1 + x^2)"));
}
BENCHMARK(BM_Parse);

void BM_Eval(benchmark::State& state) {
    const Expression f = parse("sin(x)*exp(-x^2/2) + log(1 + x^2)");
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval(f, Bindings{{"x", x}}));
        x += 1e-9;
    }
}
BENCHMARK(BM_Eval);

void BM_Derivative(benchmark::State& state) {
    const Expression f = parse("sin(x)*exp(-x^2/2) + log(1 + x^2)");
    for (auto _ : state) benchmark::DoNotOptimize(derivative(f, 0.7));
}
BENCHMARK(BM_Derivative);

void BM_Laplacian3d(benchmark::State& state) {
    const Expression g = builtin_field("vconst_harmonic_3", 3);
    const std::array<double, 3> p{0.3, -0.4, 1.1};
    for (auto _ : state) benchmark::DoNotOptimize(laplacian(g, p));
}
BENCHMARK(BM_Laplacian3d);

void BM_FindAbscissas(benchmark::State& state) {
    const Expression f = parse("exp(x)");
    for (auto _ : state) benchmark::DoNotOptimize(find_abscissas(f, Interval(0, 1)));
}
BENCHMARK(BM_FindAbscissas);

void BM_McBall(benchmark::State& state) {
    const Expression g = builtin_field("harmonic2d_3", 2);
    const BallSpec ball({1.0, 2.0}, 0.5);
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mc_ball_average(g, ball, 1 << 18, 42, threads));
    state.SetItemsProcessed(state.iterations() * (1 << 18));
}
BENCHMARK(BM_McBall)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_McSphere(benchmark::State& state) {
    const Expression g = builtin_field("vconst_harmonic_2", 3);
    const BallSpec ball({0.1, 0.2, 0.3}, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(mc_sphere_average(g, ball, 1 << 18, 42));
    state.SetItemsProcessed(state.iterations() * (1 << 18));
}
BENCHMARK(BM_McSphere)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
