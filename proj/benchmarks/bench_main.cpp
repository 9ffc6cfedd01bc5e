// Microbenchmarks for the per-step kernels: chemoattractant diffusion,
// kill-field assembly, and full engine steps on the reference 61x61 grid.

#include <benchmark/benchmark.h>

#include "timsim/chemo.hpp"
#include "timsim/continuum.hpp"
#include "timsim/grid.hpp"
#include "timsim/hybrid.hpp"
#include "timsim/init.hpp"
#include "timsim/params.hpp"

namespace {

timsim::ModelParams reference_params() {
  timsim::ModelParams p;
  p.zeta_n = 0.004;
  return p;
}

void BM_ChemoStep(benchmark::State& state) {
  const timsim::ModelParams p = reference_params();
  const timsim::Grid g = p.grid();
  timsim::ContinuumState init = timsim::initial_continuum_state(g);
  std::vector<double> scratch;
  for (auto _ : state) {
    timsim::chemo_step(init.phi, init.n, p, scratch);
    benchmark::DoNotOptimize(init.phi.v.data());
  }
}
BENCHMARK(BM_ChemoStep);

void BM_KillField(benchmark::State& state) {
  const timsim::ModelParams p = reference_params();
  const timsim::Grid g = p.grid();
  const timsim::ContinuumState init = timsim::initial_continuum_state(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(timsim::kill_field(init.c, p.theta));
  }
}
BENCHMARK(BM_KillField);

void BM_HybridStep(benchmark::State& state) {
  const timsim::ModelParams p = reference_params();
  const timsim::Grid g = p.grid();
  timsim::HybridEngine eng(timsim::initial_hybrid_state(g), p,
                           timsim::vessel_sites(g), 12345);
  for (auto _ : state) {
    eng.step();
    benchmark::DoNotOptimize(eng.state().tcell.data());
  }
}
BENCHMARK(BM_HybridStep);

void BM_ContinuumStep(benchmark::State& state) {
  const timsim::ModelParams p = reference_params();
  const timsim::Grid g = p.grid();
  timsim::ContinuumEngine eng(timsim::initial_continuum_state(g), p,
                              timsim::vessel_sites(g));
  for (auto _ : state) {
    eng.step();
    benchmark::DoNotOptimize(eng.state().c.v.data());
  }
}
BENCHMARK(BM_ContinuumStep);

}  // namespace

BENCHMARK_MAIN();
