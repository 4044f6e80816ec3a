#include "admaiora/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "admaiora/scenario.hpp"

namespace admaiora {

void TrafficConfig::validate() const {
  if (message_period_s <= 0.0) throw std::invalid_argument("message period must be positive");
  if (payload_bytes < 0) throw std::invalid_argument("payload_bytes must be non-negative");
  if (!(duty_cycle >= 0.001 && duty_cycle <= 0.1)) {
    throw std::invalid_argument("duty cycle must lie in [0.001, 0.1] (0.1% to 10%)");
  }
  if (sim_duration_s < 0.0) throw std::invalid_argument("sim duration must be non-negative");
}

DutyCycleGate::DutyCycleGate(double limit) : limit_(limit) {
  if (!(limit > 0.0 && limit <= 1.0)) {
    throw std::invalid_argument("duty cycle limit must lie in (0, 1]");
  }
}

double DutyCycleGate::admit(double candidate_start_s, double airtime_s) {
  const double start = std::max(candidate_start_s, next_allowed_s_);
  // silence of airtime * (1/limit - 1) after the frame ends
  next_allowed_s_ = start + airtime_s / limit_;
  return start;
}

std::vector<double> generate_arrivals(RngStream& rng, double mean_period_s, double duration_s,
                                      TrafficConfig::Arrival law) {
  std::vector<double> starts;
  if (duration_s <= 0.0) return starts;
  if (law == TrafficConfig::Arrival::Exponential) {
    double t = rng.exponential(mean_period_s);
    while (t < duration_s) {
      starts.push_back(t);
      t += rng.exponential(mean_period_s);
    }
  } else {
    double t = rng.uniform(0.0, mean_period_s);
    while (t < duration_s) {
      starts.push_back(t);
      t += mean_period_s;
    }
  }
  return starts;
}

namespace {

double critical_offset_s(const ChannelParams& p, const CollisionConfig& collision) {
  if (!collision.preamble_critical_section) return 0.0;
  const double t_sym_s = symbol_time_ms(p.sf, p.bw_hz) / 1000.0;
  return std::max(0.0, (p.n_preamble - 5.0)) * t_sym_s;
}

}  // namespace

std::vector<Transmission> generate_traffic(std::span<const ChannelParams> node_params,
                                           const TrafficConfig& traffic, double channel_hz,
                                           const CollisionConfig& collision,
                                           const RngStream& traffic_rng) {
  std::vector<Transmission> schedule;
  for (int n = 0; n < static_cast<int>(node_params.size()); ++n) {
    const ChannelParams& p = node_params[n];
    const double at_s = airtime_ms(p) / 1000.0;
    const double crit_s = critical_offset_s(p, collision);
    RngStream node_rng = traffic_rng.derive(static_cast<std::uint64_t>(n));
    DutyCycleGate gate(traffic.duty_cycle);
    for (double raw : generate_arrivals(node_rng, traffic.message_period_s,
                                        traffic.sim_duration_s, traffic.arrival)) {
      const double start = gate.admit(raw, at_s);
      if (start >= traffic.sim_duration_s) break;  // deferred past the end of the run
      schedule.push_back(Transmission{n, start, at_s, p.sf, channel_hz, crit_s});
    }
  }
  std::sort(schedule.begin(), schedule.end(), [](const Transmission& a, const Transmission& b) {
    return a.start_s != b.start_s ? a.start_s < b.start_s : a.node < b.node;
  });
  return schedule;
}

std::vector<bool> resolve_collisions(std::span<const Transmission> tx,
                                     std::span<const double> powers_dbm,
                                     const CollisionConfig& collision) {
  if (tx.size() != powers_dbm.size()) {
    throw std::invalid_argument("resolve_collisions: power list must match transmissions");
  }
  std::vector<bool> received(tx.size(), true);

  // Conflicts only arise within one (sf, channel) group; sweep each group in
  // start order with the still-active frames.
  std::map<std::pair<int, double>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    groups[{tx[i].sf, tx[i].channel_hz}].push_back(i);
  }
  for (auto& [key, idx] : groups) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return tx[a].start_s != tx[b].start_s ? tx[a].start_s < tx[b].start_s : a < b;
    });
    std::vector<std::size_t> active;
    for (std::size_t i : idx) {
      std::erase_if(active, [&](std::size_t a) { return tx[a].end_s() <= tx[i].start_s; });
      for (std::size_t a : active) {
        // half-open overlap, restricted to each frame's vulnerable window
        const bool hits_i = tx[a].end_s() > tx[i].start_s + tx[i].critical_offset_s &&
                            tx[a].start_s < tx[i].end_s();
        const bool hits_a = tx[i].end_s() > tx[a].start_s + tx[a].critical_offset_s &&
                            tx[i].start_s < tx[a].end_s();
        if (hits_i && !(powers_dbm[i] - powers_dbm[a] >= collision.capture_threshold_db)) {
          received[i] = false;
        }
        if (hits_a && !(powers_dbm[a] - powers_dbm[i] >= collision.capture_threshold_db)) {
          received[a] = false;
        }
      }
      active.push_back(i);
    }
  }
  return received;
}

double throughput_bps(long long delivered, int payload_bytes, double sim_duration_s) {
  if (sim_duration_s <= 0.0) throw std::invalid_argument("throughput needs a positive duration");
  return static_cast<double>(delivered) * payload_bytes * 8.0 / sim_duration_s;
}

SimResult run_simulation(const Scenario& scenario, const RssiMatrix& rssi,
                         const Assignment& assignment, const TrafficConfig& traffic,
                         const CollisionConfig& collision, std::uint64_t seed, bool record_log) {
  traffic.validate();
  if (assignment.n_nodes() != scenario.n_nodes() || rssi.n_nodes() != scenario.n_nodes() ||
      rssi.n_gateways() != scenario.n_gateways()) {
    throw std::runtime_error("simulation inputs disagree on node or gateway counts");
  }

  const int n_nodes = scenario.n_nodes();
  const int n_gw = scenario.n_gateways();
  const int bw = scenario.bandwidth_hz;

  // Per-node transmit parameters at the assigned SF. Disconnected nodes
  // still occupy air time; they transmit at SF12 and are heard nowhere.
  std::vector<ChannelParams> tx_params(scenario.node_params.begin(), scenario.node_params.end());
  for (int n = 0; n < n_nodes; ++n) {
    const int sf = assignment.connected(n) ? assignment.sf[n] : kSfMax;
    tx_params[n] = tx_params[n].at_sf(sf);
    if (assignment.connected(n)) {
      bool heard = false;
      for (int gw = 0; gw < n_gw && !heard; ++gw) {
        heard = audible(rssi, scenario.sensitivity, gw, n, sf, bw);
      }
      if (!heard) {
        throw std::runtime_error("infeasible assignment: node " + std::to_string(n) +
                                 " is heard by no gateway at SF" + std::to_string(sf));
      }
    }
  }

  SimResult result;
  result.schedule = generate_traffic(tx_params, traffic, scenario.channel_hz, collision,
                                     RngStream(seed).derive(kTrafficStream));
  const std::size_t n_tx = result.schedule.size();

  SimMetrics& m = result.metrics;
  m.sent = static_cast<long long>(n_tx);
  m.per_gw_heard.assign(n_gw, 0);
  m.per_gw_received.assign(n_gw, 0);
  m.per_gw_der.assign(n_gw, 1.0);

  std::vector<bool> delivered(n_tx, false);
  if (record_log) result.outcome.assign(n_gw, std::vector<RxOutcome>(n_tx, RxOutcome::NotHeard));

  std::vector<Transmission> heard;
  std::vector<double> heard_powers;
  std::vector<std::size_t> heard_index;
  for (int gw = 0; gw < n_gw; ++gw) {
    heard.clear();
    heard_powers.clear();
    heard_index.clear();
    for (std::size_t i = 0; i < n_tx; ++i) {
      const Transmission& t = result.schedule[i];
      const double power = rssi.at(gw, t.node);
      if (power >= scenario.sensitivity.threshold_dbm(t.sf, bw)) {
        heard.push_back(t);
        heard_powers.push_back(power);
        heard_index.push_back(i);
      }
    }
    m.per_gw_heard[gw] = static_cast<long long>(heard.size());

    const std::vector<bool> received = resolve_collisions(heard, heard_powers, collision);
    long long received_count = 0;
    for (std::size_t k = 0; k < heard.size(); ++k) {
      if (received[k]) {
        ++received_count;
        delivered[heard_index[k]] = true;
        if (record_log) result.outcome[gw][heard_index[k]] = RxOutcome::Received;
      } else {
        ++m.collisions;
        if (record_log) result.outcome[gw][heard_index[k]] = RxOutcome::Collided;
      }
    }
    m.per_gw_received[gw] = received_count;
    m.per_gw_der[gw] =
        m.per_gw_heard[gw] > 0
            ? static_cast<double>(received_count) / static_cast<double>(m.per_gw_heard[gw])
            : 1.0;
  }

  m.delivered = static_cast<long long>(std::count(delivered.begin(), delivered.end(), true));
  m.der = m.sent > 0 ? static_cast<double>(m.delivered) / static_cast<double>(m.sent) : 1.0;

  // Delivered payload over the run; equals the throughput_bps() helper when
  // payloads are homogeneous.
  double delivered_bits = 0.0;
  for (std::size_t i = 0; i < n_tx; ++i) {
    if (delivered[i]) delivered_bits += 8.0 * tx_params[result.schedule[i].node].payload_bytes;
  }
  m.throughput_bps = traffic.sim_duration_s > 0.0 ? delivered_bits / traffic.sim_duration_s : 0.0;

  if (!record_log) result.outcome.clear();
  return result;
}

void write_event_log_csv(const SimResult& result, std::ostream& out) {
  out << "time_s,node,sf,gateway,verdict\n";
  for (std::size_t gw = 0; gw < result.outcome.size(); ++gw) {
    for (std::size_t i = 0; i < result.schedule.size(); ++i) {
      const Transmission& t = result.schedule[i];
      const char* verdict = "not_heard";
      if (result.outcome[gw][i] == RxOutcome::Received) verdict = "received";
      if (result.outcome[gw][i] == RxOutcome::Collided) verdict = "collided";
      out << t.start_s << ',' << t.node << ',' << t.sf << ',' << gw << ',' << verdict << '\n';
    }
  }
}

}  // namespace admaiora
