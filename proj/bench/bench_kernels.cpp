#include <benchmark/benchmark.h>

#include "ratingdyn/equilibrium.hpp"
#include "ratingdyn/simulator.hpp"

using namespace ratingdyn;

namespace {

RatingModel polarized() { return RatingModel(LatentDistribution::beta(0.3, 0.3), InfluenceKernel::distance(3)); }

Execution exec_of(const benchmark::State& state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

void BM_CurveTabulate(benchmark::State& state) {
  const auto model = polarized();
  const auto grid = uniform_grid(1001);
  for (auto _ : state) benchmark::DoNotOptimize(curve_tabulate(model, grid, kDefaultCurveTol, exec_of(state)));
}

void BM_Replications(benchmark::State& state) {
  const auto model = polarized();
  ReplicationPlan plan;
  plan.n_agents = 10000;
  plan.n_reps = 40;
  const std::vector<double> eqs{0.25, 0.75};
  for (auto _ : state) benchmark::DoNotOptimize(run_replications(model, plan, eqs, exec_of(state)));
}

void BM_BifurcationSweep(benchmark::State& state) {
  const ModelFamily family = [](double a) {
    return RatingModel(LatentDistribution::beta(a, a / 0.7 - a), InfluenceKernel::distance(3));
  };
  std::vector<double> alphas;
  for (int i = 0; i < 24; ++i) alphas.push_back(0.1 + 0.12 * i);
  RootOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(bifurcation_sweep(family, alphas, opts));
}

}  // namespace

BENCHMARK(BM_CurveTabulate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Replications)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BifurcationSweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
