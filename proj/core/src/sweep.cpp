#include "admaiora/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "admaiora/stats.hpp"

namespace admaiora {

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::MessagePeriod: return "mp";
    case SweepAxis::NNodes: return "nodes";
    case SweepAxis::NGateways: return "gateways";
  }
  return "?";
}

std::optional<SweepAxis> sweep_axis_from_name(const std::string& name) {
  if (name == "mp" || name == "message_period") return SweepAxis::MessagePeriod;
  if (name == "nodes" || name == "n_nodes") return SweepAxis::NNodes;
  if (name == "gateways" || name == "n_gateways") return SweepAxis::NGateways;
  return std::nullopt;
}

namespace {

// Worst case over SFs: the slowest SF cannot sustain the message period at
// the configured duty cycle.
bool duty_cycle_violated(const ScenarioSpec& spec) {
  ChannelParams p;
  p.bw_hz = spec.bandwidth_hz;
  p.cr = spec.cr;
  p.payload_bytes = spec.payload_bytes;
  p.n_preamble = spec.n_preamble;
  p.preamble_symbol_offset = spec.preamble_symbol_offset;
  const double worst_at_s = airtime_ms(p.at_sf(kSfMax)) / 1000.0;
  return spec.traffic.message_period_s < worst_at_s / spec.traffic.duty_cycle;
}

Assignment allocate(const Scenario& scenario, const RssiMatrix& rssi, Allocator allocator,
                    std::uint64_t seed) {
  switch (allocator) {
    case Allocator::AdrMgw:
      return adr_mgw(rssi, scenario.sensitivity, scenario.bandwidth_hz);
    case Allocator::ProbAdr: {
      RngStream rng = RngStream(seed).derive(kAllocationStream);
      return probabilistic_adr(rssi, scenario.sensitivity, scenario.bandwidth_hz,
                               scenario.sf_cost(), rng);
    }
    case Allocator::AdMaiora:
      return ad_maiora(rssi, scenario.sensitivity, scenario.sf_cost(), scenario.bandwidth_hz,
                       scenario.node_params);
  }
  throw std::invalid_argument("unknown allocator");
}

void apply_axis(ScenarioSpec* spec, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::MessagePeriod:
      spec->traffic.message_period_s = value;
      break;
    case SweepAxis::NNodes:
      spec->n_nodes = static_cast<int>(std::lround(value));
      break;
    case SweepAxis::NGateways:
      spec->n_gateways = static_cast<int>(std::lround(value));
      break;
  }
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

void write_row_echo_header(std::ostream& out) {
  out << "allocator,topology,n_nodes,n_gateways,mp_s,duty_cycle,payload_bytes,sim_s,seed,"
         "gateway_spacing_m,tx_power_dbm,capture_threshold_db,sf_cost_mode,dc_violation";
}

void write_row_echo(const RunRow& r, std::ostream& out) {
  out << allocator_name(r.allocator) << ',' << topology_name(r.topology) << ',' << r.n_nodes << ','
      << r.n_gateways << ',' << r.message_period_s << ',' << r.duty_cycle << ','
      << r.payload_bytes << ',' << r.sim_duration_s << ',' << r.seed << ','
      << r.gateway_spacing_m << ',' << r.tx_power_dbm << ',' << r.capture_threshold_db << ','
      << (r.sf_cost_mode == SfCostMode::Computed ? "computed" : "literal") << ','
      << csv_bool(r.dc_violation);
}

}  // namespace

RunRow run_once(const ScenarioSpec& base, Allocator allocator, std::uint64_t seed) {
  ScenarioSpec spec = base;
  spec.seed = seed;

  RunRow row;
  row.allocator = allocator;
  row.topology = spec.topology;
  row.seed = seed;
  row.message_period_s = spec.traffic.message_period_s;
  row.duty_cycle = spec.traffic.duty_cycle;
  row.payload_bytes = spec.payload_bytes;
  row.sim_duration_s = spec.traffic.sim_duration_s;
  row.gateway_spacing_m = spec.gateway_spacing_m;
  row.tx_power_dbm = spec.tx_power_dbm;
  row.capture_threshold_db = spec.collision.capture_threshold_db;
  row.sf_cost_mode = spec.sf_cost_mode;
  row.dc_violation = duty_cycle_violated(spec);

  const Scenario scenario = build_scenario(spec);
  row.n_nodes = scenario.n_nodes();
  row.n_gateways = scenario.n_gateways();

  const RssiMatrix rssi = scenario.build_rssi();
  const Assignment assignment = allocate(scenario, rssi, allocator, seed);
  row.histogram = sf_histogram(assignment);

  const SimResult result =
      run_simulation(scenario, rssi, assignment, scenario.traffic, scenario.collision, seed);
  row.metrics = result.metrics;
  return row;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("sweep needs at least one axis value");
  if (spec.allocators.empty()) throw std::invalid_argument("sweep needs at least one allocator");
  if (spec.seeds_per_point < 1) throw std::invalid_argument("sweep needs at least one seed");

  struct Point {
    double value;
    Allocator allocator;
    std::uint64_t seed;
  };
  std::vector<Point> points;
  for (double v : spec.values) {
    for (Allocator a : spec.allocators) {
      for (int s = 0; s < spec.seeds_per_point; ++s) {
        points.push_back({v, a, spec.base_seed + static_cast<std::uint64_t>(s)});
      }
    }
  }

  SweepResult result;
  result.rows.resize(points.size());

  const int jobs = std::max(1, spec.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      const Point& pt = points[i];
      ScenarioSpec scenario_spec = spec.base;
      apply_axis(&scenario_spec, spec.axis, pt.value);
      RunRow& row = result.rows[i];
      try {
        row = run_once(scenario_spec, pt.allocator, pt.seed);
      } catch (const std::exception& e) {
        row.allocator = pt.allocator;
        row.topology = scenario_spec.topology;
        row.seed = pt.seed;
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  // aggregate per (axis value, allocator), in canonical order
  for (double v : spec.values) {
    for (Allocator a : spec.allocators) {
      std::vector<double> ders;
      std::vector<double> tps;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].value == v && points[i].allocator == a && result.rows[i].ok) {
          ders.push_back(result.rows[i].metrics.der);
          tps.push_back(result.rows[i].metrics.throughput_bps);
        }
      }
      if (ders.empty()) continue;
      AggregateRow agg;
      agg.axis = spec.axis;
      agg.axis_value = v;
      agg.allocator = a;
      agg.topology = spec.base.topology;
      agg.n_seeds = static_cast<int>(ders.size());
      agg.mean_der = mean(ders);
      agg.ci95_der = ci95_halfwidth(ders);
      agg.mean_throughput_bps = mean(tps);
      agg.ci95_throughput_bps = ci95_halfwidth(tps);
      result.aggregates.push_back(agg);
    }
  }
  return result;
}

void write_results_csv(std::span<const RunRow> rows, std::ostream& out) {
  write_row_echo_header(out);
  out << ",sent,delivered,collisions,der,throughput_bps";
  for (int sf = kSfMin; sf <= kSfMax; ++sf) out << ",sf" << sf;
  out << ",disconnected,min_gw_der,max_gw_der,ok,error\n";
  for (const RunRow& r : rows) {
    write_row_echo(r, out);
    const SimMetrics& m = r.metrics;
    double min_gw = 1.0, max_gw = 1.0;
    if (!m.per_gw_der.empty()) {
      min_gw = *std::min_element(m.per_gw_der.begin(), m.per_gw_der.end());
      max_gw = *std::max_element(m.per_gw_der.begin(), m.per_gw_der.end());
    }
    out << ',' << m.sent << ',' << m.delivered << ',' << m.collisions << ',' << m.der << ','
        << m.throughput_bps;
    for (int c : r.histogram.count) out << ',' << c;
    out << ',' << r.histogram.disconnected << ',' << min_gw << ',' << max_gw << ','
        << csv_bool(r.ok) << ',' << r.error << '\n';
  }
}

void write_summary_csv(std::span<const AggregateRow> aggregates, std::ostream& out) {
  out << "axis,axis_value,allocator,topology,n_seeds,mean_der,ci95_der,mean_throughput_bps,"
         "ci95_throughput_bps\n";
  for (const AggregateRow& a : aggregates) {
    out << sweep_axis_name(a.axis) << ',' << a.axis_value << ',' << allocator_name(a.allocator)
        << ',' << topology_name(a.topology) << ',' << a.n_seeds << ',' << a.mean_der << ',';
    if (a.ci95_der) out << *a.ci95_der;
    out << ',' << a.mean_throughput_bps << ',';
    if (a.ci95_throughput_bps) out << *a.ci95_throughput_bps;
    out << '\n';
  }
}

void write_per_gw_csv(std::span<const RunRow> rows, std::ostream& out) {
  write_row_echo_header(out);
  out << ",gateway,heard,received,partial_der\n";
  for (const RunRow& r : rows) {
    if (!r.ok) continue;
    for (std::size_t gw = 0; gw < r.metrics.per_gw_der.size(); ++gw) {
      write_row_echo(r, out);
      out << ',' << gw << ',' << r.metrics.per_gw_heard[gw] << ',' << r.metrics.per_gw_received[gw]
          << ',' << r.metrics.per_gw_der[gw] << '\n';
    }
  }
}

void write_sf_histogram_csv(std::span<const RunRow> rows, std::ostream& out) {
  write_row_echo_header(out);
  out << ",sf,count\n";
  for (const RunRow& r : rows) {
    if (!r.ok) continue;
    for (int sf = kSfMin; sf <= kSfMax; ++sf) {
      write_row_echo(r, out);
      out << ',' << sf << ',' << r.histogram.count[sf_index(sf)] << '\n';
    }
    write_row_echo(r, out);
    out << ",disconnected," << r.histogram.disconnected << '\n';
  }
}

}  // namespace admaiora
