#include <benchmark/benchmark.h>

#include <random>

#include "s2l/matching.hpp"

namespace {

void BM_MaxMatching(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  s2l::ScoreMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = u(g);
  for (auto _ : state) benchmark::DoNotOptimize(s2l::max_matching(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MaxMatching)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNCubed);

}  // namespace
