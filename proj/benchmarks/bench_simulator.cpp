#include <benchmark/benchmark.h>

#include "admaiora/scenario.hpp"
#include "admaiora/simulator.hpp"

using namespace admaiora;

static void BM_RunSimulation(benchmark::State& state) {
  ScenarioSpec spec;
  spec.n_nodes = static_cast<int>(state.range(0));
  spec.n_gateways = 4;
  spec.topology = Topology::Balanced;
  spec.traffic.sim_duration_s = 600.0;
  const Scenario s = build_scenario(spec);
  const RssiMatrix rssi = s.build_rssi();
  const Assignment a = adr_mgw(rssi, s.sensitivity, s.bandwidth_hz);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(s, rssi, a, s.traffic, s.collision, 1));
  }
}
BENCHMARK(BM_RunSimulation)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
