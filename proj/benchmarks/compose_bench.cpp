#include <benchmark/benchmark.h>

#include "s2l/metrics.hpp"
#include "s2l/sketch_parser.hpp"
#include "s2l/synth.hpp"
#include "s2l/toy_corpus.hpp"

namespace {

const s2l::PrimitiveStore& store() {
  static const auto s = s2l::PrimitiveStore::build(s2l::toy::primitive_pool(237, 236, 7));
  return s;
}

void BM_ComposeSketch(benchmark::State& state) {
  const auto corpus = s2l::toy::corpus(64, 2);
  s2l::SynthParams params;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& rec = corpus[i++ % corpus.size()];
    params.seed = i;
    benchmark::DoNotOptimize(s2l::compose_sketch(rec.layout, store(), params, rec.id));
  }
}
BENCHMARK(BM_ComposeSketch);

void BM_ParseSketch(benchmark::State& state) {
  const auto corpus = s2l::toy::corpus(64, 3);
  std::vector<s2l::Sketch> sketches;
  for (const auto& rec : corpus) sketches.push_back(s2l::compose_sketch(rec.layout, store(), {}, rec.id));
  std::size_t i = 0;
  for (auto _ : state) {
    const std::size_t j = i++ % corpus.size();
    benchmark::DoNotOptimize(s2l::parse_sketch(sketches[j], corpus[j].layout.assets));
  }
}
BENCHMARK(BM_ParseSketch);

void BM_Miou(benchmark::State& state) {
  const auto a = s2l::toy::corpus(32, 4), b = s2l::toy::corpus(32, 5);
  std::size_t i = 0;
  for (auto _ : state) {
    const std::size_t j = i++ % a.size();
    benchmark::DoNotOptimize(s2l::miou(a[j].layout, b[j].layout));
  }
}
BENCHMARK(BM_Miou);

}  // namespace
