// Compares the OpenMP paths against their serial references: the singular
// value sweep and the multi-start synthesis driver.

#include <benchmark/benchmark.h>

#include <vector>

#include "fixorder/analysis.hpp"
#include "fixorder/benchmarks.hpp"
#include "fixorder/interconnect.hpp"
#include "fixorder/synthesis.hpp"

namespace {

fixorder::StateSpaceModel sweep_system() {
  return fixorder::close_loop(fixorder::four_disk_plant(),
                              fixorder::reference::four_disk_k8().to_model());
}

void bm_sigma_parallel(benchmark::State& state) {
  const fixorder::StateSpaceModel sys = sweep_system();
  const std::vector<double> grid =
      fixorder::log_grid(1e-2, 1e2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fixorder::sigma(sys, grid));
}

void bm_sigma_serial(benchmark::State& state) {
  const fixorder::StateSpaceModel sys = sweep_system();
  const std::vector<double> grid =
      fixorder::log_grid(1e-2, 1e2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fixorder::sigma_serial(sys, grid));
}

fixorder::SynthesisOptions small_run(bool parallel) {
  fixorder::SynthesisOptions o;
  o.objective = fixorder::Objective::spectral_abscissa;
  o.n_starts = 6;
  o.rng_seed = 5;
  o.max_iters_per_start = 60;
  o.parallel = parallel;
  return o;
}

void bm_synthesize_parallel(benchmark::State& state) {
  const fixorder::StateSpaceModel p = fixorder::two_mass_spring_plant();
  for (auto _ : state)
    benchmark::DoNotOptimize(fixorder::synthesize(p, 1, small_run(true)));
}

void bm_synthesize_serial(benchmark::State& state) {
  const fixorder::StateSpaceModel p = fixorder::two_mass_spring_plant();
  for (auto _ : state)
    benchmark::DoNotOptimize(fixorder::synthesize(p, 1, small_run(false)));
}

}  // namespace

BENCHMARK(bm_sigma_parallel)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sigma_serial)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_synthesize_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_synthesize_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
