// Serial reference kernel vs the OpenMP grid-stride kernel on synthetic
// chunks. Run with --benchmark_filter to narrow.
#include <benchmark/benchmark.h>

#include <random>

#include "tripleid/kernel.hpp"
#include "tripleid/store.hpp"

namespace {

using namespace tripleid;

TripleChunk make_chunk(std::size_t n) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<TermId> s(1, 100000), p(1, 20), o(1, 200000);
  TripleChunk c;
  c.data.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    c.data.push_back(s(rng));
    c.data.push_back(p(rng));
    c.data.push_back(o(rng));
  }
  return c;
}

const TripleChunk& chunk() {
  static const TripleChunk c = make_chunk(std::size_t{1} << 21);
  return c;
}

void BM_SerialSingle(benchmark::State& st) {
  const PatternKey key{0, 3, 0};
  for (auto _ : st) benchmark::DoNotOptimize(serial::search_chunk(chunk(), key));
  st.SetItemsProcessed(st.iterations() * chunk().size());
}
BENCHMARK(BM_SerialSingle)->Unit(benchmark::kMillisecond);

void BM_ParallelSingle(benchmark::State& st) {
  const PatternKey key{0, 3, 0};
  const auto workers = static_cast<unsigned>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(search_chunk(chunk(), key, workers));
  st.SetItemsProcessed(st.iterations() * chunk().size());
}
BENCHMARK(BM_ParallelSingle)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

std::vector<PatternKey> union_keys(std::size_t k) {
  std::vector<PatternKey> keys;
  for (std::size_t i = 0; i < k; ++i) keys.push_back({0, static_cast<TermId>(1 + i % 20), 0});
  return keys;
}

void BM_SerialMulti(benchmark::State& st) {
  const auto keys = union_keys(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(serial::search_multi(chunk(), keys));
  st.SetItemsProcessed(st.iterations() * chunk().size());
}
BENCHMARK(BM_SerialMulti)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ParallelMulti(benchmark::State& st) {
  const auto keys = union_keys(static_cast<std::size_t>(st.range(0)));
  const auto workers = static_cast<unsigned>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(search_multi(chunk(), keys, workers));
  st.SetItemsProcessed(st.iterations() * chunk().size());
}
BENCHMARK(BM_ParallelMulti)->ArgsProduct({{4, 32}, {1, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
