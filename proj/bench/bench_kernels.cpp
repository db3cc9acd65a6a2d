// Serial reference against the OpenMP kernels. Run with
// --benchmark_filter to pick one kernel; the thread count of the OpenMP
// variants is the benchmark argument after the problem size.

#include "pcrfle/graph.hpp"
#include "pcrfle/kernels/parallel.hpp"
#include "pcrfle/kernels/reference.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

using namespace pcrfle;

namespace {

Eigen::MatrixXd cloud(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < p.size(); ++i)
    p.data()[i] = u(rng);
  return p;
}

// Radius giving roughly 20 neighbours per point in the unit square.
double radius(std::size_t n) { return std::sqrt(20.0 / (3.14159 * static_cast<double>(n))); }

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (auto &x : v)
    x = normal(rng);
  return v;
}

void threads_from(const benchmark::State &state) {
  kernels::omp::set_thread_count(static_cast<int>(state.range(1)));
}

void BM_EdgesReference(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = cloud(n, 2);
  const auto kernel = KernelSpec::truncated_gaussian();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::reference::epsilon_edges(p, radius(n), kernel));
}

void BM_EdgesOmp(benchmark::State &state) {
  threads_from(state);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = cloud(n, 2);
  const auto kernel = KernelSpec::truncated_gaussian();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::omp::epsilon_edges(p, radius(n), kernel));
}

void BM_EdgesGridOmp(benchmark::State &state) {
  threads_from(state);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = cloud(n, 2);
  const auto kernel = KernelSpec::truncated_gaussian();
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::omp::epsilon_edges_grid(p, radius(n), kernel));
}

template <bool Parallel> void BM_LaplacianApply(benchmark::State &state) {
  if constexpr (Parallel)
    threads_from(state);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = build_graph(SampleSet(cloud(n, 2)), radius(n), KernelSpec::triangular());
  const auto u = noise(n);
  std::vector<double> y(n);
  const auto &deg = g.degree();
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::omp::laplacian_apply(g.csr(), {deg.data(), n}, 1.0, u, y);
    else
      kernels::reference::laplacian_apply(g.csr(), {deg.data(), n}, 1.0, u, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Parallel> void BM_PairEnergy(benchmark::State &state) {
  if constexpr (Parallel)
    threads_from(state);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = noise(n);
  std::vector<double> table(n);
  for (std::size_t k = 1; k < n; ++k)
    table[k] = std::pow(static_cast<double>(k), -1.5);
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(kernels::omp::pair_energy(u, table));
    else
      benchmark::DoNotOptimize(kernels::reference::pair_energy(u, table));
  }
}

} // namespace

BENCHMARK(BM_EdgesReference)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EdgesOmp)->ArgsProduct({{2000, 8000}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EdgesGridOmp)->ArgsProduct({{2000, 8000}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LaplacianApply<false>)->Arg(20000)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_LaplacianApply<true>)->ArgsProduct({{20000}, {1, 2, 4}})->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_PairEnergy<false>)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PairEnergy<true>)->ArgsProduct({{4096}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
