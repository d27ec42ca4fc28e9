#include <benchmark/benchmark.h>

#include <random>

#include "spin_atlas/catalog.hpp"
#include "spin_atlas/crossing.hpp"
#include "spin_atlas/eigensolver.hpp"
#include "spin_atlas/hamiltonian.hpp"
#include "spin_atlas/sweep.hpp"

namespace {

using namespace spin_atlas;

ComplexMatrix random_hermitian(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

void BM_ComplexEigendecompose(benchmark::State& state) {
  const ComplexMatrix h = random_hermitian(state.range(0), 7);
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(h));
}
BENCHMARK(BM_ComplexEigendecompose)->Arg(54)->Arg(108)->Arg(324)->Arg(648)->Unit(benchmark::kMillisecond);

void BM_ComplexEigenvalues(benchmark::State& state) {
  const ComplexMatrix h = random_hermitian(state.range(0), 7);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(h));
}
BENCHMARK(BM_ComplexEigenvalues)->Arg(54)->Arg(108)->Arg(324)->Arg(648)->Unit(benchmark::kMillisecond);

void BM_RealEigendecompose(benchmark::State& state) {
  const RealMatrix h = random_hermitian(state.range(0), 11).real();
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(h));
}
BENCHMARK(BM_RealEigendecompose)->Arg(54)->Arg(108)->Arg(324)->Arg(648)->Unit(benchmark::kMillisecond);

void BM_RealEigenvalues(benchmark::State& state) {
  const RealMatrix h = random_hermitian(state.range(0), 11).real();
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(h));
}
BENCHMARK(BM_RealEigenvalues)->Arg(54)->Arg(108)->Arg(324)->Arg(648)->Unit(benchmark::kMillisecond);

void BM_BuildHamiltonian(benchmark::State& state) {
  const auto& entry = get_system("2onv-p1");
  const HamiltonianModel model(entry.spec);
  double b = 700.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.at(b, 2870.0));
    b += 1e-3;
  }
}
BENCHMARK(BM_BuildHamiltonian);

void BM_Sweep(benchmark::State& state) {
  const auto& entry = get_system("2onv-p1");
  SweepOptions opts;
  opts.field_min = 680.0;
  opts.field_max = 780.0;
  opts.points = static_cast<std::size_t>(state.range(0));
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sweep(entry.spec, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sweep)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_RefineCrossing(benchmark::State& state) {
  const auto& entry = get_system("nv");
  const SpectrumEvaluator ev(entry.spec, 2870.0);
  CrossingEvent e;
  e.bracket_lo = 1020.0;
  e.bracket_hi = 1028.0;
  e.lower_level = 0;
  for (auto _ : state) benchmark::DoNotOptimize(refine_and_classify(ev, e));
}
BENCHMARK(BM_RefineCrossing);

}  // namespace

BENCHMARK_MAIN();
