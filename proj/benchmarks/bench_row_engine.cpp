/// @file bench_row_engine.cpp
/// @brief Throughput benchmarks for row enumeration and row statistics:
///        streaming cursor speed, exact vs interval accumulation, and
///        scaling across worker counts.

#include <benchmark/benchmark.h>

#include <cwforest/analysis.hpp>
#include <cwforest/row_engine.hpp>
#include <cwforest/tree.hpp>

namespace {

const cwforest::TreeParams kParams{1, 2};
const cwforest::Rational kRoot{2, 1};

/// Walk one full row through the streaming cursor.
void BM_RowCursor(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    cwforest::RowCursor cursor(kRoot, depth, kParams);
    cwforest::Rational value;
    while (cursor.next(value)) {
      benchmark::DoNotOptimize(value);
    }
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << depth));
}
BENCHMARK(BM_RowCursor)->DenseRange(8, 16, 4);

/// Full row statistics with exact rational accumulation.
void BM_RowStatsExact(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto stats = cwforest::row_stats(kRoot, depth, kParams,
                                     cwforest::SumMode::exact());
    benchmark::DoNotOptimize(stats);
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << depth));
}
BENCHMARK(BM_RowStatsExact)->DenseRange(8, 14, 3);

/// Full row statistics with directed interval accumulation at 128 bits.
void BM_RowStatsEnclosure(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto stats = cwforest::row_stats(kRoot, depth, kParams,
                                     cwforest::SumMode::enclosure(128));
    benchmark::DoNotOptimize(stats);
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << depth));
}
BENCHMARK(BM_RowStatsEnclosure)->DenseRange(8, 14, 3);

/// Worker scaling for a fixed-size interval-mode row.
void BM_RowStatsWorkers(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  constexpr int kDepth = 16;
  for (auto _ : state) {
    auto stats = cwforest::row_stats(kRoot, kDepth, kParams,
                                     cwforest::SumMode::enclosure(128),
                                     workers);
    benchmark::DoNotOptimize(stats);
  }
  state.SetItemsProcessed(state.iterations() * (int64_t{1} << kDepth));
}
BENCHMARK(BM_RowStatsWorkers)->RangeMultiplier(2)->Range(1, 8)
    ->MeasureProcessCPUTime()->UseRealTime();

/// Certified limit computation across precision levels.
void BM_LimitEnclosure(benchmark::State& state) {
  const int bits = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto limit = cwforest::limit_enclosure(kParams, bits);
    benchmark::DoNotOptimize(limit);
  }
}
BENCHMARK(BM_LimitEnclosure)->Arg(64)->Arg(192)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
