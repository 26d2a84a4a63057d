#include <benchmark/benchmark.h>

#include <random>

#include "pdolab/spectral.hpp"

namespace {

pdolab::Matrix random_matrix(int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  pdolab::Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = pdolab::Complex{g(rng), g(rng)};
  return m;
}

void BM_Eigenvalues(benchmark::State& state) {
  pdolab::pin_dense_solver_threads(1);
  const pdolab::Matrix m = random_matrix(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pdolab::eigenvalue_sequence(m).values.data());
}
BENCHMARK(BM_Eigenvalues)->Arg(129)->Arg(257)->Arg(513)->Arg(1025)->Unit(benchmark::kMillisecond);

void BM_SingularValues(benchmark::State& state) {
  pdolab::pin_dense_solver_threads(1);
  const pdolab::Matrix m = random_matrix(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pdolab::singular_values(m).values.data());
}
BENCHMARK(BM_SingularValues)->Arg(257)->Arg(513)->Arg(1025)->Unit(benchmark::kMillisecond);

void BM_HermitianEigen(benchmark::State& state) {
  pdolab::pin_dense_solver_threads(1);
  const pdolab::Matrix a = random_matrix(static_cast<int>(state.range(0)));
  const pdolab::Matrix h = 0.5 * (a + a.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(pdolab::hermitian_eigen(h).values.data());
}
BENCHMARK(BM_HermitianEigen)->Arg(257)->Arg(513)->Unit(benchmark::kMillisecond);

}  // namespace
