// Serial against OpenMP execution of the figure scan. Set UVSTAB_THREADS to
// pin the team size of the parallel variant.

#include <benchmark/benchmark.h>

#include <vector>

#include "uvstab/config.hpp"
#include "uvstab/poincare.hpp"

namespace {

void figure_scan(benchmark::State& state, uvstab::Execution execution) {
  const std::vector<double> grid = uvstab::default_figure_grid();
  const uvstab::FigureOptions options;
  for (auto _ : state) {
    auto rows = uvstab::figure_experiment(grid, 1e-2, 1.0, options, execution);
    benchmark::DoNotOptimize(rows.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
  state.counters["threads"] = execution == uvstab::Execution::parallel ? uvstab::scan_threads() : 1;
}

}  // namespace

BENCHMARK_CAPTURE(figure_scan, serial, uvstab::Execution::serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(figure_scan, parallel, uvstab::Execution::parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
