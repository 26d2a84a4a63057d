#include <benchmark/benchmark.h>

#include "pdolab/basis.hpp"
#include "pdolab/operator.hpp"
#include "pdolab/symbol.hpp"

namespace {

pdolab::Symbol bump_symbol(int d) {
  const pdolab::Bump w = pdolab::Bump::with_integral(std::vector<double>(static_cast<std::size_t>(d), 0.0), 2.5, 1.0);
  pdolab::PrincipalFn p = [w](std::span<const double> x, std::span<const double>) {
    return pdolab::Complex{w(x), 0.0};
  };
  return pdolab::make_classical_symbol(d, p, 1.0, w.support());
}

void BM_AssembleClassical1D(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const auto sym = bump_symbol(1);
  const auto basis = pdolab::enumerate_frequencies(1, K);
  for (auto _ : state) benchmark::DoNotOptimize(pdolab::assemble_operator(sym, basis).entries.data());
  state.counters["N"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_AssembleClassical1D)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_AssembleClassical2D(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const auto sym = bump_symbol(2);
  const auto basis = pdolab::enumerate_frequencies(2, K);
  for (auto _ : state) benchmark::DoNotOptimize(pdolab::assemble_operator(sym, basis).entries.data());
  state.counters["N"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_AssembleClassical2D)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_EnumerateFrequencies(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(pdolab::enumerate_frequencies(d, K).size());
}
BENCHMARK(BM_EnumerateFrequencies)->Args({1, 512})->Args({2, 30})->Args({3, 8});

}  // namespace
