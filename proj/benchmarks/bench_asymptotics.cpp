#include <benchmark/benchmark.h>

#include "hdet/akhiezer_kac.hpp"

using namespace hdet;

static void BM_AKConstants(benchmark::State& state)
{
    const KernelSpec spec = make_builtin(state.range(0) ? "mult-laplace" : "laplace", {{"a", 3.0}});
    for (auto _ : state) benchmark::DoNotOptimize(ak_constants(spec));
    state.SetLabel(spec.name);
}
BENCHMARK(BM_AKConstants)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_ConvolutionOracle(benchmark::State& state)
{
    const KernelSpec l = make_builtin("laplace", {{"a", 3.0}});
    for (auto _ : state) benchmark::DoNotOptimize(convolution_oracle(l, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ConvolutionOracle)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);
