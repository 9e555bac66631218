#include <benchmark/benchmark.h>

#include "qdd/noise.hpp"
#include "qdd/sweep.hpp"

using namespace qdd;

namespace {

struct Fixture {
  ModelParams p;
  PropagatorGrid pg;
  SpectralQuadrature sq;

  explicit Fixture(double horizon)
      : pg(solve_retarded(p, TimeGrid::from_horizon(1e-3, horizon))),
        sq(build_spectral_quadrature(p, SpectralConfig{}, horizon)) {}
};

const Fixture& fixture() {
  static const Fixture f(4.0);
  return f;
}

void noise(benchmark::State& state, Execution mode) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(noise_correlations(f.pg, f.sq, mode));
  state.counters["workers"] = mode == Execution::Parallel ? worker_count() : 1;
  state.counters["nodes"] = f.sq.node_count();
}

void propagator(benchmark::State& state) {
  ModelParams p;
  const auto grid = TimeGrid::from_horizon(1e-3, 12.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_retarded(p, grid));
}

void sweep(benchmark::State& state, Execution mode) {
  SweepSpec s;
  s.x = {"w_L", log_space(0.5, 30.0, 4)};
  s.y = {"w_R", log_space(0.5, 30.0, 4)};
  s.grid = TimeGrid::from_horizon(0.01, 6.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(s, mode));
}

}  // namespace

BENCHMARK_CAPTURE(noise, serial, Execution::Serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(noise, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(propagator)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, serial, Execution::Serial)->Unit(benchmark::kSecond)->UseRealTime()->Iterations(1);
BENCHMARK_CAPTURE(sweep, parallel, Execution::Parallel)->Unit(benchmark::kSecond)->UseRealTime()->Iterations(1);

BENCHMARK_MAIN();
