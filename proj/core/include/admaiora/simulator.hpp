#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "admaiora/airtime.hpp"
#include "admaiora/allocation.hpp"
#include "admaiora/radio_model.hpp"
#include "admaiora/rng.hpp"

namespace admaiora {

struct TrafficConfig {
  enum class Arrival { Exponential, FixedPeriod };

  double message_period_s = 10.0;  // mean inter-arrival time
  int payload_bytes = 20;
  double duty_cycle = 0.1;  // on-air fraction cap, ETSI G3 band default
  double sim_duration_s = 3600.0;
  Arrival arrival = Arrival::Exponential;

  void validate() const;
};

struct CollisionConfig {
  double capture_threshold_db = 6.0;
  // When set, a frame is only vulnerable from 5 symbols before the end of
  // its preamble onward; earlier overlap is harmless.
  bool preamble_critical_section = false;
};

struct Transmission {
  int node = 0;
  double start_s = 0.0;
  double airtime_s = 0.0;
  int sf = 7;
  double channel_hz = 869.5e6;
  // Start of the vulnerable window relative to start_s; 0 = whole frame.
  double critical_offset_s = 0.0;

  double end_s() const { return start_s + airtime_s; }
};

enum class RxOutcome : std::uint8_t { NotHeard, Received, Collided };

struct SimMetrics {
  long long sent = 0;
  long long delivered = 0;   // unique messages received by >= 1 gateway
  long long collisions = 0;  // (transmission, gateway) pairs heard but lost
  std::vector<long long> per_gw_heard;
  std::vector<long long> per_gw_received;
  double der = 1.0;  // delivered / sent, 1.0 for an empty run
  std::vector<double> per_gw_der;
  double throughput_bps = 0.0;
};

struct SimResult {
  SimMetrics metrics;
  std::vector<Transmission> schedule;  // sorted by (start, node)
  // outcome[gw][i] for schedule[i]; filled only when the log was requested.
  std::vector<std::vector<RxOutcome>> outcome;
};

// Enforces the post-transmission silence airtime * (1/limit - 1) over one
// node's schedule. admit() returns the (possibly deferred) start time.
class DutyCycleGate {
 public:
  explicit DutyCycleGate(double limit);

  double admit(double candidate_start_s, double airtime_s);

 private:
  double limit_;
  double next_allowed_s_ = 0.0;
};

// Raw start times over [0, duration): Poisson arrivals with mean period, or
// a fixed period with a uniformly random phase.
std::vector<double> generate_arrivals(RngStream& rng, double mean_period_s, double duration_s,
                                      TrafficConfig::Arrival law);

// Full gated uplink schedule for all nodes, sorted by (start, node). The SF,
// airtime, and critical offset of each transmission come from the per-node
// params; per-node arrival streams derive from `traffic_rng` by node index.
std::vector<Transmission> generate_traffic(std::span<const ChannelParams> node_params,
                                           const TrafficConfig& traffic, double channel_hz,
                                           const CollisionConfig& collision,
                                           const RngStream& traffic_rng);

// Reception verdicts at one gateway. `tx` holds only the transmissions this
// gateway hears, sorted by start time; `powers_dbm[i]` is the received power
// of tx[i]. Two frames conflict iff same channel, same SF, and their
// intervals overlap (half-open); within a conflict a frame survives iff its
// power exceeds every conflicting power by the capture threshold.
std::vector<bool> resolve_collisions(std::span<const Transmission> tx,
                                     std::span<const double> powers_dbm,
                                     const CollisionConfig& collision);

// delivered * payload_bytes * 8 / sim_duration. Throws on non-positive
// duration.
double throughput_bps(long long delivered, int payload_bytes, double sim_duration_s);

class Scenario;  // scenario.hpp

// Runs the uplink schedule of `assignment` against every gateway of the
// scenario. A gateway hears a transmission iff its received power meets the
// sensitivity threshold at the transmission's SF; sub-threshold signals
// neither deliver nor collide. Disconnected nodes transmit (at SF12) but are
// heard nowhere.
SimResult run_simulation(const Scenario& scenario, const RssiMatrix& rssi,
                         const Assignment& assignment, const TrafficConfig& traffic,
                         const CollisionConfig& collision, std::uint64_t seed,
                         bool record_log = false);

// CSV: time_s,node,sf,gateway,verdict — one row per (transmission, gateway).
void write_event_log_csv(const SimResult& result, std::ostream& out);

}  // namespace admaiora
