#include <benchmark/benchmark.h>

#include "hdet/fredholm.hpp"
#include "hdet/rhp.hpp"
#include "hdet/tracy_widom.hpp"

using namespace hdet;

static void BM_Discretize(benchmark::State& state)
{
    const KernelSpec g = make_builtin("gaussian");
    const Grid grid = default_grid(g, 0.0, {static_cast<int>(state.range(0))});
    for (auto _ : state) benchmark::DoNotOptimize(discretize(g, 0.0, grid));
    state.counters["nodes"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_Discretize)->Arg(16)->Arg(24)->Arg(32);

static void BM_LogDet(benchmark::State& state)
{
    const char* names[] = {"gaussian", "airy", "bessel", "laplace", "mult-laplace"};
    const KernelSpec spec = make_builtin(names[state.range(0)]);
    const double t = spec.flavor == Flavor::additive ? 0.0 : 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(log_fredholm(spec, t, 1.0));
    state.SetLabel(names[state.range(0)]);
}
BENCHMARK(BM_LogDet)->DenseRange(0, 4);

static void BM_EdgeSample(benchmark::State& state)
{
    const KernelSpec a = make_builtin("airy");
    const Grid grid = default_grid(a, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(edge_sample(a, 0.0, 1.0, static_cast<int>(state.range(0)), grid));
}
BENCHMARK(BM_EdgeSample)->Arg(0)->Arg(2);

static void BM_TracyWidom(benchmark::State& state)
{
    const KernelSpec g = make_builtin("gaussian");
    for (auto _ : state) benchmark::DoNotOptimize(tw_logF(g, -1.0, 1.0));
}
BENCHMARK(BM_TracyWidom)->Unit(benchmark::kMillisecond);

static void BM_Perturbed(benchmark::State& state)
{
    const KernelSpec b = make_builtin("bessel");
    const auto method = state.range(0) ? PerturbedMethod::closed : PerturbedMethod::direct;
    for (auto _ : state) benchmark::DoNotOptimize(perturbed(b, 1.0, 0.5, PerturbedKind::F4, method));
}
BENCHMARK(BM_Perturbed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_AssembleX(benchmark::State& state)
{
    const KernelSpec g = make_builtin("gaussian");
    const Grid grid = default_grid(g, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_X(g, 0.0, {0.5, 1.0}, grid));
}
BENCHMARK(BM_AssembleX);

static void BM_PainleveII(benchmark::State& state)
{
    std::vector<double> ts;
    for (int i = 0; i <= 16; ++i) ts.push_back(-1.0 + 0.25 * i);
    for (auto _ : state) benchmark::DoNotOptimize(pii_oracle(ts));
}
BENCHMARK(BM_PainleveII);
