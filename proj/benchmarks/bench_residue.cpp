#include <benchmark/benchmark.h>

#include "pdolab/residue.hpp"
#include "pdolab/symbol.hpp"
#include "pdolab/traces.hpp"

namespace {

void BM_NonmeasurableResidue(benchmark::State& state) {
  const auto sym = pdolab::make_nonmeasurable_symbol(static_cast<int>(state.range(0)));
  std::vector<double> t;
  for (int i = 0; i < 17; ++i) t.push_back(0.6 + 0.4 * i);
  const auto grid = pdolab::doubly_exponential_log_grid(t);
  for (auto _ : state) benchmark::DoNotOptimize(pdolab::residue_series_log(sym, grid).res.data());
}
BENCHMARK(BM_NonmeasurableResidue)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_HarmonicBand(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  std::vector<pdolab::Complex> v(N);
  double h = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    h += 1.0 / static_cast<double>(n);
    v[n - 1] = h / std::log1p(static_cast<double>(n));
  }
  const auto series = pdolab::Series::dense(v);
  for (auto _ : state) benchmark::DoNotOptimize(pdolab::dixmier_band(series).hi);
}
BENCHMARK(BM_HarmonicBand)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace
