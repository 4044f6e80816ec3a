#include <benchmark/benchmark.h>

#include "admaiora/airtime.hpp"

using namespace admaiora;

static void BM_Airtime(benchmark::State& state) {
  ChannelParams p;
  p.payload_bytes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    for (int sf = kSfMin; sf <= kSfMax; ++sf) {
      benchmark::DoNotOptimize(airtime_ms(p.at_sf(sf)));
    }
  }
}
BENCHMARK(BM_Airtime)->Arg(20)->Arg(255);

static void BM_SfCostVector(benchmark::State& state) {
  const ChannelParams ref;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sf_cost_vector(SfCostMode::Computed, ref));
  }
}
BENCHMARK(BM_SfCostVector);
