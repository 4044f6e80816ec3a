#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "admaiora/airtime.hpp"
#include "admaiora/radio_model.hpp"
#include "admaiora/rng.hpp"

namespace admaiora {

// Marker for nodes below sensitivity at every gateway even at SF12.
inline constexpr int kDisconnected = -1;

enum class Allocator { AdrMgw, ProbAdr, AdMaiora };

const char* allocator_name(Allocator a);
std::optional<Allocator> allocator_from_name(const std::string& name);

struct Assignment {
  std::vector<int> sf;  // per node: kSfMin..kSfMax, or kDisconnected
  Allocator provenance = Allocator::AdrMgw;

  int n_nodes() const { return static_cast<int>(sf.size()); }
  bool connected(int node) const { return sf[node] != kDisconnected; }
};

// Accumulated air time per (SF, gateway) cell, milliseconds.
class PressureTable {
 public:
  explicit PressureTable(int n_gateways);

  double& at(int sf, int gw) { return v_[static_cast<std::size_t>(sf_index(sf)) * n_gw_ + gw]; }
  double at(int sf, int gw) const {
    return v_[static_cast<std::size_t>(sf_index(sf)) * n_gw_ + gw];
  }

  int n_gateways() const { return n_gw_; }

  // Column maximum: the most loaded SF row of one gateway.
  double gateway_max(int gw) const;

  // Most loaded (sf, gw) cell; ties go to the lowest gateway index, then the
  // lowest SF.
  std::pair<int, int> argmax_cell() const;

 private:
  int n_gw_;
  std::vector<double> v_;
};

// ADR generalized to several gateways: the lowest SF heard by at least one
// gateway; nodes heard nowhere at SF12 become Disconnected.
Assignment adr_mgw(const RssiMatrix& rssi, const SensitivityTable& sens, int bw_hz);

// Baseline that draws each node's SF from its feasible range {adr_mgw SF ..
// SF12} with probability proportional to 1 / sf_cost[sf].
Assignment probabilistic_adr(const RssiMatrix& rssi, const SensitivityTable& sens, int bw_hz,
                             const SfCostVector& sf_cost, RngStream& rng);

// sfpress[sf, gw] = sum of the air times of the nodes assigned `sf` that gw
// hears at that SF. One message per node; `rate_weights` (messages per unit
// time, or any relative weight) scales each node's contribution when a
// heterogeneous-rate pressure is wanted. Leave empty for the default.
PressureTable compute_pressure(const Assignment& assignment, const RssiMatrix& rssi,
                               const SensitivityTable& sens, int bw_hz,
                               std::span<const ChannelParams> node_params,
                               std::span<const double> rate_weights = {});

// A node transmitting at the most loaded SF of the most loaded gateway,
// together with the benefit estimate for promoting it.
struct CandidateMove {
  int node = -1;
  int overloaded_sf = 0;   // wSF, the SF the node currently uses
  double weight_ms = 0.0;  // W_n
};

// Picks the most promising node of the worst (SF, gateway) cell.
//
// For every candidate n and every gateway g that hears n at some sf* > wSF,
// the slack set is { lambda_g - sfpress[sf*, g] : sf* audible } with
// lambda_g the column maximum of g; the gateway contributes the minimum of
// its set, or 0 when the set is empty, and W_n sums the contributions over
// gateways. Ties on W_n go to the lowest node id. Returns nullopt when the
// worst cell has no unfrozen audible node left.
std::optional<CandidateMove> best_node(const RssiMatrix& rssi, const SensitivityTable& sens,
                                       int bw_hz, const std::vector<int>& sfmap,
                                       const PressureTable& sfpress,
                                       const std::vector<bool>& frozen);

struct SfChoice {
  double free_airtime_ms = 0.0;  // nextAT; > 0 only when a move helps
  std::optional<int> sf;         // nextSF; empty when no SF has free air time
};

// Picks the SF maximizing the worst-case free air time for the candidate:
// for each sf* > wSF the slack set collects, over every gateway hearing the
// node at sf*, lambda_g - sfpress[sf*, g] - sf_cost[sf*]; the chosen sf*
// maximizes the set minimum. Gateways are included even when the sf* row
// already holds their column maximum (their non-positive slack is what keeps
// a committed move from raising any gateway's peak). Ties go to the lowest
// SF.
SfChoice best_sf(const CandidateMove& candidate, const RssiMatrix& rssi,
                 const SensitivityTable& sens, int bw_hz, const PressureTable& sfpress,
                 const SfCostVector& sf_cost);

struct CommittedMove {
  int node = -1;
  int from_sf = 0;
  int to_sf = 0;
  double free_airtime_ms = 0.0;
};

// Air-time pressure balancing loop. Starts from adr_mgw, then repeatedly
// recomputes the pressure table, picks best_node / best_sf, and commits the
// move when it leaves free air time; a node is frozen once moved or once no
// SF helps it, so the loop ends after at most one commit-or-freeze per node.
// Committed moves never raise any gateway's maximum pressure as long as
// sf_cost is the Computed vector for the shared message parameters.
// `trace`, when given, receives the committed moves in order.
Assignment ad_maiora(const RssiMatrix& rssi, const SensitivityTable& sens,
                     const SfCostVector& sf_cost, int bw_hz,
                     std::span<const ChannelParams> node_params,
                     std::vector<CommittedMove>* trace = nullptr);

struct SfHistogram {
  std::array<int, kNumSf> count{};  // indexed sf_index(sf)
  int disconnected = 0;
};

SfHistogram sf_histogram(const Assignment& assignment);

// CSV: node,sf,provenance. Disconnected nodes carry sf = -1.
void write_assignment_csv(const Assignment& assignment, std::ostream& out);

}  // namespace admaiora
