#include <benchmark/benchmark.h>

#include "ans/besov.hpp"
#include "ans/experiments.hpp"
#include "ans/mixed_norm.hpp"
#include "ans/solver.hpp"
#include "ans/transform.hpp"

using namespace ans;

static void BM_TransformRoundTrip(benchmark::State& state) {
  Grid g = Grid::cubic(static_cast<int>(state.range(0)));
  BandWindow win{1.0, 6.0};
  SpectralField f = gen_random_scalar(g, 1, win, win, 1.0);
  std::vector<cplx> phys(g.size());
  for (auto _ : state) {
    inverse_transform(f, phys);
    SpectralField back = forward_transform(std::span<const cplx>(phys), g);
    benchmark::DoNotOptimize(back.coeffs.data());
  }
}
BENCHMARK(BM_TransformRoundTrip)->Arg(32)->Arg(64);

static void BM_BesovStatic(benchmark::State& state) {
  Grid g = Grid::cubic(static_cast<int>(state.range(0)));
  DyadicDecomposition dec(g);
  BandWindow win{1.0, 8.0};
  VectorField u = gen_random_bandlimited(g, 2, win, win, 1.0);
  BesovParams params{4.0, 1.0, 0.0};
  for (auto _ : state) {
    double v = besov_static(u, dec, params);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_BesovStatic)->Arg(32)->Arg(64);

static void BM_SolverStep(benchmark::State& state) {
  Grid g = Grid::cubic(static_cast<int>(state.range(0)));
  SolverConfig cfg;
  cfg.grid = g;
  cfg.nu_h = 0.1;
  cfg.nu_3 = 0.01;
  cfg.dt = 1e-3;
  cfg.T = cfg.dt;
  BandWindow win{1.0, 6.0};
  VectorField u0 = gen_random_bandlimited(g, 3, win, win, 1e-2);
  for (auto _ : state) {
    SolveResult sol = solve_u(u0, cfg);
    benchmark::DoNotOptimize(sol.final_state.u1.coeffs.data());
  }
}
BENCHMARK(BM_SolverStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
