#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "loschmidt/core.hpp"
#include "loschmidt/diagnostics.hpp"
#include "loschmidt/fields.hpp"
#include "loschmidt/propagator.hpp"

using namespace loschmidt;

namespace {

SimParams params_for(benchmark::State& state) {
  SimParams p;
  p.n_points = static_cast<std::size_t>(state.range(0));
  return p;
}

HamiltonianSpec perturbed(const SimParams& p) {
  HamiltonianSpec spec;
  spec.perturbation.emplace(p.grid(), 1e-9, 1, 20, 1);
  return spec;
}

void BM_Step(benchmark::State& state) {
  const SimParams p = params_for(state);
  Propagator prop(p, perturbed(p));
  WaveField psi = make_initial_state(p, p.grid());
  long s = 0;
  for (auto _ : state) {
    prop.advance(psi, s, 1);
    ++s;
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_Kinetic(benchmark::State& state) {
  SimParams p = params_for(state);
  const auto method = static_cast<KineticMethod>(state.range(1));
  KineticSolver solver(p.grid(), p, p.dt, method);
  WaveField psi = make_initial_state(p, p.grid());
  for (auto _ : state) {
    solver.apply(psi.values());
    benchmark::ClobberMemory();
  }
}

void BM_Poisson(benchmark::State& state) {
  const SimParams p = params_for(state);
  PoissonSolver solver(p.grid(), p.K0, p.poisson_symbol);
  std::vector<double> rho(p.n_points), phi(p.n_points);
  const Grid g = p.grid();
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = 1.0 + 0.1 * std::cos(g.node(i));
  for (auto _ : state) {
    solver.solve(rho, phi);
    benchmark::DoNotOptimize(phi.data());
  }
}

void BM_Assemble(benchmark::State& state) {
  const SimParams p = params_for(state);
  PotentialAssembler assembler(p, perturbed(p));
  const WaveField psi = make_initial_state(p, p.grid());
  std::vector<double> v(p.n_points);
  for (auto _ : state) {
    assembler.assemble(psi.values(), 0.0, v);
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_PhaseRotation(benchmark::State& state) {
  const SimParams p = params_for(state);
  WaveField psi = make_initial_state(p, p.grid());
  std::vector<double> v(p.n_points);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.01 * static_cast<double>(i % 17);
  const double scale = -p.dt / p.h;
  for (auto _ : state) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double a = scale * v[i];
      psi[i] *= Complex(std::cos(a), std::sin(a));
    }
    benchmark::ClobberMemory();
  }
}

void BM_Diagnostics(benchmark::State& state) {
  const SimParams p = params_for(state);
  const WaveField a = make_initial_state(p, p.grid());
  const WaveField b = a;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity(a, b) + symmetry(b));
  }
}

}  // namespace

BENCHMARK(BM_Step)->Arg(256)->Arg(2048)->Arg(4096);
BENCHMARK(BM_Kinetic)
    ->Args({2048, static_cast<int>(KineticMethod::kExponential)})
    ->Args({2048, static_cast<int>(KineticMethod::kCrankNicolson)})
    ->Args({2048, static_cast<int>(KineticMethod::kCrankNicolsonSpectral)});
BENCHMARK(BM_Poisson)->Arg(2048);
BENCHMARK(BM_Assemble)->Arg(2048);
BENCHMARK(BM_PhaseRotation)->Arg(2048);
BENCHMARK(BM_Diagnostics)->Arg(2048);

BENCHMARK_MAIN();
