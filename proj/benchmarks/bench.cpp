#include <benchmark/benchmark.h>

#include "curvelab/beltrami.hpp"
#include "curvelab/finitetype.hpp"

using namespace curvelab;

static void BM_JetMultiply(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const Jet2 u = Jet2::seed(Variable::u, 0.3, order);
  const Jet2 v = Jet2::seed(Variable::v, -0.2, order);
  const Jet2 a = sin(u) + v * v;
  const Jet2 b = cos(v) * u;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(BM_JetMultiply)->DenseRange(2, 4);

static void BM_EvaluateFrame(benchmark::State& state) {
  const SurfacePatch h = helicoid(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_frame(h, 0.4, 0.7));
  }
}
BENCHMARK(BM_EvaluateFrame);

static void BM_GaussMapLaplacian(benchmark::State& state) {
  const SurfacePatch q = quadric1(2, 3, 1);
  const FrameData f = evaluate_frame(q, 0.1, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(laplacian_gauss_map(Form::II, f));
  }
}
BENCHMARK(BM_GaussMapLaplacian);

static void BM_GaussMatrixFit(benchmark::State& state) {
  const SurfacePatch q = quadric2(2, 3);
  const SampleSet set = sample(q, SamplingStrategy::jittered, static_cast<int>(state.range(0)), 1);
  FitOptions opts;
  opts.workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_gauss_matrix(Form::II, q, set, opts));
  }
}
BENCHMARK(BM_GaussMatrixFit)->Args({64, 1})->Args({400, 1})->Args({400, 4});

BENCHMARK_MAIN();
