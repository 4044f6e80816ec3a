#include <benchmark/benchmark.h>

#include "admaiora/allocation.hpp"
#include "admaiora/scenario.hpp"

using namespace admaiora;

namespace {

Scenario make_scenario(int n_nodes, int n_gateways) {
  ScenarioSpec spec;
  spec.n_nodes = n_nodes;
  spec.n_gateways = n_gateways;
  spec.topology = Topology::Balanced;
  return build_scenario(spec);
}

}  // namespace

static void BM_AdrMgw(benchmark::State& state) {
  const Scenario s = make_scenario(static_cast<int>(state.range(0)), 4);
  const RssiMatrix rssi = s.build_rssi();
  for (auto _ : state) {
    benchmark::DoNotOptimize(adr_mgw(rssi, s.sensitivity, s.bandwidth_hz));
  }
}
BENCHMARK(BM_AdrMgw)->Arg(100)->Arg(500);

static void BM_AdMaiora(benchmark::State& state) {
  const Scenario s = make_scenario(static_cast<int>(state.range(0)), 4);
  const RssiMatrix rssi = s.build_rssi();
  const SfCostVector cost = s.sf_cost();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ad_maiora(rssi, s.sensitivity, cost, s.bandwidth_hz, s.node_params));
  }
}
BENCHMARK(BM_AdMaiora)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_ComputePressure(benchmark::State& state) {
  const Scenario s = make_scenario(500, 4);
  const RssiMatrix rssi = s.build_rssi();
  const Assignment a = adr_mgw(rssi, s.sensitivity, s.bandwidth_hz);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_pressure(a, rssi, s.sensitivity, s.bandwidth_hz, s.node_params));
  }
}
BENCHMARK(BM_ComputePressure);
