#include <benchmark/benchmark.h>

#include <random>

#include "finharm/harmonic.hpp"

namespace {

finharm::Signal random_signal(const finharm::GroupSpec& g) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<finharm::Complex> v(g.count());
  for (auto& z : v) z = {nd(rng), nd(rng)};
  return finharm::Signal(g, std::move(v), 1.0);
}

void transform(benchmark::State& state, finharm::DftMode mode) {
  const finharm::GroupSpec g({state.range(0)});
  const finharm::Signal f = random_signal(g);
  for (auto _ : state) benchmark::DoNotOptimize(finharm::dft(f, mode));
  state.SetComplexityN(state.range(0));
}

void BM_Reference(benchmark::State& state) { transform(state, finharm::DftMode::Reference); }
void BM_Fast(benchmark::State& state) { transform(state, finharm::DftMode::Fast); }

void BM_FastMixed(benchmark::State& state) {
  const finharm::GroupSpec g({12, 5, 7, 13});
  const finharm::Signal f = random_signal(g);
  for (auto _ : state) benchmark::DoNotOptimize(finharm::dft(f));
}

}  // namespace

BENCHMARK(BM_Reference)->RangeMultiplier(4)->Range(256, 1 << 14)->Complexity()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Fast)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Fast)->Arg(4099)->Arg(65521)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FastMixed)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
