#include <benchmark/benchmark.h>

#include <cstdint>

#include "corrwalk/aggregator.hpp"
#include "corrwalk/link.hpp"
#include "corrwalk/p_sampler.hpp"
#include "corrwalk/rng.hpp"
#include "corrwalk/special_functions.hpp"
#include "corrwalk/walk.hpp"

namespace cw = corrwalk;

namespace {

void BM_BvnCdf(benchmark::State& state) {
  double r = -0.95, acc = 0.0;
  for (auto _ : state) {
    acc += cw::bvn_cdf(0.3, -0.7, r);
    r = r > 0.95 ? -0.95 : r + 1e-3;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_BvnCdf);

// Arg 1 passes the precomputed sigma_max; arg 0 rescans the feasible range.
void BM_SolveP(benchmark::State& state) {
  const cw::HurstModel model(0.7);
  const cw::PSampler sampler(model, cw::InfeasiblePolicy::resample);
  const bool cached = state.range(0) != 0;
  double u = 0.0, acc = 0.0;
  for (auto _ : state) {
    u += 0.6180339887498949;
    u -= static_cast<double>(static_cast<std::int64_t>(u));
    const double target = cw::target_from_uniform(u * sampler.u_max(), model);
    acc += cached ? cw::solve_p(target, model, sampler.sigma_max()) : cw::solve_p(target, model);
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_SolveP)->Arg(0)->Arg(1);

void BM_TrajectorySteps(benchmark::State& state) {
  const cw::HurstModel model(0.7);
  const auto mode = static_cast<cw::WalkMode>(state.range(0));
  cw::PSample ps;
  ps.p = 0.3;
  ps.rho = cw::persistence_from_p(ps.p, model);
  cw::WalkStepper stepper(mode, ps, model);
  cw::Rng rng(1);
  std::int64_t ones = 0;
  for (auto _ : state) ones += stepper.step(rng);
  benchmark::DoNotOptimize(ones);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrajectorySteps)
    ->Arg(static_cast<int>(cw::WalkMode::paper))
    ->Arg(static_cast<int>(cw::WalkMode::matched))
    ->Arg(static_cast<int>(cw::WalkMode::enriquez));

void BM_GenerateFbm(benchmark::State& state) {
  cw::GenerateOptions o{cw::HurstModel(0.7)};
  o.steps = state.range(0);
  o.paths = state.range(1);
  o.workers = static_cast<unsigned>(state.range(2));
  for (auto _ : state) {
    auto path = cw::generate_fbm(o);
    benchmark::DoNotOptimize(path.values.data());
  }
  state.SetItemsProcessed(state.iterations() * o.steps * o.paths);
}
BENCHMARK(BM_GenerateFbm)
    ->Args({4096, 256, 1})
    ->Args({100'000, 100, 1})
    ->Args({100'000, 100, 4})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
