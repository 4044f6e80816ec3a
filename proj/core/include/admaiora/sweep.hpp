#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "admaiora/allocation.hpp"
#include "admaiora/scenario.hpp"
#include "admaiora/simulator.hpp"

namespace admaiora {

enum class SweepAxis { MessagePeriod, NNodes, NGateways };

const char* sweep_axis_name(SweepAxis axis);
std::optional<SweepAxis> sweep_axis_from_name(const std::string& name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::MessagePeriod;
  std::vector<double> values;
  std::vector<Allocator> allocators;
  int seeds_per_point = 1;
  std::uint64_t base_seed = 1;
  ScenarioSpec base;
  int jobs = 1;
};

// One experiment row: the full input parameterization echoed next to the
// metrics, so the row alone reproduces the run.
struct RunRow {
  Allocator allocator = Allocator::AdMaiora;
  Topology topology = Topology::Balanced;
  int n_nodes = 0;
  int n_gateways = 0;
  double message_period_s = 0.0;
  double duty_cycle = 0.0;
  int payload_bytes = 0;
  double sim_duration_s = 0.0;
  std::uint64_t seed = 0;
  double gateway_spacing_m = 0.0;
  double tx_power_dbm = 0.0;
  double capture_threshold_db = 0.0;
  SfCostMode sf_cost_mode = SfCostMode::Computed;
  // Set when the message period cannot sustain the duty cycle at the
  // slowest SF (the shaded region of the MP sweeps).
  bool dc_violation = false;

  SimMetrics metrics;
  SfHistogram histogram;

  bool ok = true;
  std::string error;
};

// Aggregate over seeds for one (axis value, allocator) point.
struct AggregateRow {
  SweepAxis axis = SweepAxis::MessagePeriod;
  double axis_value = 0.0;
  Allocator allocator = Allocator::AdMaiora;
  Topology topology = Topology::Balanced;
  int n_seeds = 0;
  double mean_der = 0.0;
  std::optional<double> ci95_der;
  double mean_throughput_bps = 0.0;
  std::optional<double> ci95_throughput_bps;
};

struct SweepResult {
  std::vector<RunRow> rows;        // canonical order: axis value, allocator, seed
  std::vector<AggregateRow> aggregates;
};

// Scenario build -> RSSI -> allocation -> simulation for one seed.
RunRow run_once(const ScenarioSpec& spec, Allocator allocator, std::uint64_t seed);

// Full factorial (axis values x allocators x seeds). Points run concurrently
// up to spec.jobs; failures are recorded per row and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec);

void write_results_csv(std::span<const RunRow> rows, std::ostream& out);
void write_summary_csv(std::span<const AggregateRow> aggregates, std::ostream& out);

// Per-gateway partial DER (heard, received, received/heard) for each run.
void write_per_gw_csv(std::span<const RunRow> rows, std::ostream& out);

// Node counts per SF per run, plot-ready.
void write_sf_histogram_csv(std::span<const RunRow> rows, std::ostream& out);

}  // namespace admaiora
