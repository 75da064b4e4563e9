#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "llb/assembly.hpp"
#include "llb/config.hpp"
#include "llb/scheme.hpp"

using namespace llb;

namespace {

const SchemeParams sim1{5.0, 2.0, 50.0, 1.0, 1e-3};

Vec3 sim1_u0(const Vec3& x) {
  constexpr double pi = std::numbers::pi;
  return {std::cos(2 * pi * x[0]), std::sin(2 * pi * x[1]), 2 * std::cos(2 * pi * x[0]) * std::sin(2 * pi * x[1])};
}

Mesh bench_mesh(int dim, int n) { return dim == 2 ? unit_square_mesh(n) : unit_cube_mesh(n); }

void BM_AssembleStiffness(benchmark::State& state) {
  const Mesh m = bench_mesh(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(m));
  state.counters["cells"] = static_cast<double>(m.num_cells());
}
BENCHMARK(BM_AssembleStiffness)->Args({2, 32})->Args({2, 128})->Args({3, 8})->Args({3, 16});

void BM_AssembleCross(benchmark::State& state) {
  const Mesh m = bench_mesh(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const NodalField w = NodalField::interpolate(m, sim1_u0);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_cross(m, w));
  state.counters["cells"] = static_cast<double>(m.num_cells());
}
BENCHMARK(BM_AssembleCross)->Args({2, 32})->Args({2, 128})->Args({3, 8})->Args({3, 16});

void BM_AssembleWeightedMass(benchmark::State& state) {
  const Mesh m = bench_mesh(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const NodalField w = NodalField::interpolate(m, sim1_u0);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_weighted_mass(m, w));
}
BENCHMARK(BM_AssembleWeightedMass)->Args({2, 32})->Args({2, 128})->Args({3, 8});

// One time step (assembly plus linear solve) with each preconditioner.
void BM_Step(benchmark::State& state) {
  const auto mesh = std::make_shared<const Mesh>(unit_square_mesh(static_cast<int>(state.range(0))));
  SolverOptions opt;
  opt.preconditioner = static_cast<Preconditioner>(state.range(1));
  const SimState s0 = init_state(mesh, sim1_u0, sim1);
  for (auto _ : state) benchmark::DoNotOptimize(step(s0, sim1, 2.5e-3, opt));
  state.SetLabel(to_string(opt.preconditioner));
}
BENCHMARK(BM_Step)
    ->ArgsProduct({{16, 64},
                   {static_cast<long>(Preconditioner::automatic), static_cast<long>(Preconditioner::jacobi),
                    static_cast<long>(Preconditioner::block_ilu0), static_cast<long>(Preconditioner::sparse_lu)}})
    ->Unit(benchmark::kMillisecond);

// Steady-state cost per step once the lagged factorization is reused.
void BM_Run20Steps(benchmark::State& state) {
  const auto mesh = std::make_shared<const Mesh>(unit_square_mesh(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(run(mesh, sim1, {0.05, 20}, sim1_u0));
}
BENCHMARK(BM_Run20Steps)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
