#include <cmath>

#include <benchmark/benchmark.h>

#include "eulerinf/biot_savart.hpp"
#include "eulerinf/construction.hpp"
#include "eulerinf/evolve.hpp"
#include "eulerinf/gluing.hpp"
#include "eulerinf/polar_field.hpp"
#include "eulerinf/sobolev.hpp"

using namespace eulerinf;

namespace {

const InitialData& desk() {
  static const InitialData d = assemble_initial(ConstructionParams{});
  return d;
}

// unit bump on (0.5, 2) in every mode up to k_max
PolarField dense_field(std::size_t nodes, int k_max) {
  auto g = make_log_grid(0.2, 3.0, nodes);
  PolarField f(g, k_max);
  for (std::size_t j = 0; j < f.rows(); ++j) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double u = (2.0 * g->node(i) - 2.5) / 1.5;
      f.row(j)[i] = std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) / (1.0 + j) : 0.0;
    }
  }
  return f;
}

}  // namespace

static void BM_SolveVelocity(benchmark::State& state) {
  const auto f = dense_field(static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
  solve_velocity(f);  // warm the weight cache
  for (auto _ : state) benchmark::DoNotOptimize(solve_velocity(f));
}
BENCHMARK(BM_SolveVelocity)->Args({256, 8})->Args({600, 54})->Args({1200, 128})->Unit(benchmark::kMillisecond);

static void BM_ToPhysical(benchmark::State& state) {
  const auto f = dense_field(600, static_cast<int>(state.range(0)));
  const auto m = default_samples(f, 2);
  for (auto _ : state) benchmark::DoNotOptimize(to_physical(f, m));
}
BENCHMARK(BM_ToPhysical)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_L1Norm(benchmark::State& state) {
  const auto& f = desk().omega;
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(f, 1.0));
}
BENCHMARK(BM_L1Norm)->Unit(benchmark::kMillisecond);

static void BM_DeskStep(benchmark::State& state) {
  const auto& d = desk();
  EvolveConfig c;
  c.track_parts = false;
  const Evolver ev(c);
  const double dt = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(ev.step(d.omega, dt));
}
BENCHMARK(BM_DeskStep)->Unit(benchmark::kMillisecond);

static void BM_HankelNorm(benchmark::State& state) {
  const auto& f = desk().oscillatory;
  SobolevSpec sp;
  sp.s = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(norm(f, sp));
}
BENCHMARK(BM_HankelNorm)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_VelocitySup(benchmark::State& state) {
  const auto& f = desk().omega;
  for (auto _ : state) benchmark::DoNotOptimize(velocity_sup(f));
}
BENCHMARK(BM_VelocitySup)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
