// Step-throughput microbenchmarks: plain interior kernel vs. layered grids.

#include <benchmark/benchmark.h>

#include <cmath>

#include "pmlwave/config.hpp"
#include "pmlwave/damping.hpp"
#include "pmlwave/grid.hpp"
#include "pmlwave/media.hpp"
#include "pmlwave/solver2d.hpp"
#include "pmlwave/solver3d.hpp"

using namespace pmlwave;

namespace {

ScalarField bump_u0(const GridSpec& grid) {
  ScalarField u0(grid.n[0], grid.n[1], grid.dim == 3 ? grid.n[2] : 1);
  const int k_hi = grid.dim == 3 ? grid.n[2] : 1;
  for (int k = 0; k < k_hi; ++k)
    for (int j = 0; j < grid.n[1]; ++j)
      for (int i = 0; i < grid.n[0]; ++i) {
        double r2 = grid.coord(0, i) * grid.coord(0, i) +
                    grid.coord(1, j) * grid.coord(1, j);
        if (grid.dim == 3) r2 += grid.coord(2, k) * grid.coord(2, k);
        u0(i, j, k) = std::exp(-40.0 * r2);
      }
  return u0;
}

void bench_step2d(benchmark::State& state, double zeta_bar) {
  const double dx = 1.0 / state.range(0);
  const GridSpec grid = build_grid(2, {0.5, 0.5}, {0.1, 0.1}, {dx, dx});
  const MediumModel medium = constant_medium(grid, 1.0);
  const DampingProfile prof =
      sample_profile(grid, {zeta_bar, zeta_bar, zeta_bar});
  Stepper2D st(grid, medium, prof, cfl_timestep(grid, 1.0, 0.9));
  ScalarField v0(grid.n[0], grid.n[1], 1);
  st.set_initial(bump_u0(grid), v0);
  for (auto _ : state) st.step();
  state.SetItemsProcessed(state.iterations() * grid.total_nodes());
}

void bench_step3d(benchmark::State& state, double zeta_bar) {
  const double dx = 1.0 / state.range(0);
  const GridSpec grid =
      build_grid(3, {0.5, 0.5, 0.5}, {0.1, 0.1, 0.1}, {dx, dx, dx});
  const MediumModel medium = constant_medium(grid, 1.0);
  const DampingProfile prof =
      sample_profile(grid, {zeta_bar, zeta_bar, zeta_bar});
  Stepper3D st(grid, medium, prof, cfl_timestep(grid, 1.0, 0.9));
  ScalarField v0(grid.n[0], grid.n[1], grid.n[2]);
  st.set_initial(bump_u0(grid), v0);
  for (auto _ : state) st.step();
  state.SetItemsProcessed(state.iterations() * grid.total_nodes());
}

} // namespace

BENCHMARK_CAPTURE(bench_step2d, plain, 0.0)->Arg(100)->Arg(200)->Arg(400);
BENCHMARK_CAPTURE(bench_step2d, layered, 80.0)->Arg(100)->Arg(200)->Arg(400);
BENCHMARK_CAPTURE(bench_step3d, plain, 0.0)->Arg(20)->Arg(40);
BENCHMARK_CAPTURE(bench_step3d, layered, 80.0)->Arg(20)->Arg(40);

BENCHMARK_MAIN();
