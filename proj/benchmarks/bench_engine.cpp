#include <benchmark/benchmark.h>

#include "cbo/engine.hpp"
#include "cbo/metrics.hpp"

namespace {

using namespace cbo;

Ensemble initial(std::size_t n, std::size_t d) { return sample_initial(GaussianIsotropic{Vec(d, 1.0), 1.0}, n, d, 1); }

void BM_ConsensusPoint(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ens = initial(n, 2);
  const auto obj = rastrigin(2);
  const auto e = energies(ens, obj);
  for (auto _ : state) benchmark::DoNotOptimize(consensus_point(ens, e, 1e15));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_ConsensusPoint)->RangeMultiplier(8)->Range(64, 32768);

void BM_CboStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  CboParams p;
  p.lambda = 1.0;
  p.sigma = 0.5;
  p.alpha = 1e15;
  p.n_particles = n;
  p.dim = d;
  auto ens = initial(n, d);
  const auto obj = rastrigin(d);
  std::size_t step = 0;
  for (auto _ : state) {
    ens = cbo_step(ens, obj, p, step++);
    benchmark::DoNotOptimize(ens.data().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_CboStep)->Args({1000, 1})->Args({20000, 1})->Args({4000, 2})->Args({4000, 10});

void BM_MakeRecord(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ens = initial(n, 1);
  const Vec vstar{0.0};
  const Vec c{0.1};
  const std::vector<double> radii{0.1, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(make_record(ens, vstar, c, radii));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_MakeRecord)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
