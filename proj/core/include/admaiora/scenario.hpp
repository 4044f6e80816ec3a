#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "admaiora/airtime.hpp"
#include "admaiora/radio_model.hpp"
#include "admaiora/rng.hpp"
#include "admaiora/simulator.hpp"

namespace admaiora {

enum class Topology { Balanced, Unbalanced, Single };

const char* topology_name(Topology t);
std::optional<Topology> topology_from_name(const std::string& name);

// Fully resolved experiment scenario: every position and parameter pinned.
class Scenario {
 public:
  std::vector<Position> gateways;
  std::vector<Position> nodes;
  std::vector<ChannelParams> node_params;  // per node; sf is a placeholder until allocation
  PathLossModel path_loss;
  SensitivityTable sensitivity = SensitivityTable::defaults();
  double tx_power_dbm = 14.0;
  int bandwidth_hz = 125000;
  double channel_hz = 869.5e6;
  TrafficConfig traffic;
  CollisionConfig collision;
  SfCostMode sf_cost_mode = SfCostMode::Computed;
  std::uint64_t seed = 1;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_gateways() const { return static_cast<int>(gateways.size()); }

  SfCostVector sf_cost() const;
  RssiMatrix build_rssi() const;  // uses the scenario's shadowing stream

  void validate() const;  // throws std::invalid_argument naming the violated invariant
};

// Declarative scenario description, the JSON config schema. Omitted fields
// take the defaults below (869.5 MHz carrier, 125 kHz, CR 4/5, 20-byte
// messages, MP 10 s, 10% duty cycle).
struct ScenarioSpec {
  int n_nodes = 500;
  int n_gateways = 4;
  Topology topology = Topology::Balanced;
  int hot_gateway = 0;  // unbalanced topology only
  double gateway_spacing_m = 200.0;
  double central_radius_m = 50.0;
  double hot_radius_m = 50.0;
  double spread_margin_m = 100.0;
  std::uint64_t seed = 1;

  double tx_power_dbm = 14.0;
  int bandwidth_hz = 125000;
  double channel_hz = 869.5e6;
  int cr = 1;
  int payload_bytes = 20;
  int n_preamble = 8;
  double preamble_symbol_offset = kDefaultPreambleSymbolOffset;
  // nullopt = automatic DE policy (SF11/12 at 125 kHz); otherwise forced.
  std::optional<bool> low_dr_opt;

  PathLossModel path_loss;
  std::optional<SensitivityTable> sensitivity;  // nullopt = defaults
  TrafficConfig traffic;
  CollisionConfig collision;
  SfCostMode sf_cost_mode = SfCostMode::Computed;

  // Explicit placements override the generated topology when present.
  std::optional<std::vector<Position>> explicit_gateways;
  std::optional<std::vector<Position>> explicit_nodes;
};

// Gateway layouts, centroid at the origin: 1 -> origin, 2 -> +-spacing/2 on
// x, 4 -> square of side `spacing`, 8 -> 2x4 grid of pitch `spacing`. Other
// counts fall back to a centered near-square grid of the same pitch.
std::vector<Position> place_gateways(int n_gw, double spacing_m);

// 60% of the nodes uniform in a disc of `central_radius_m` around the
// gateway centroid, the rest uniform over the gateway bounding box inflated
// by `spread_margin_m`. The 60/40 split is exact, rounding toward central.
std::vector<Position> gen_balanced(int n_nodes, std::span<const Position> gateways,
                                   double central_radius_m, double spread_margin_m,
                                   RngStream& rng);

// Same split, but the central 60% cluster in a `hot_radius_m` disc around
// one designated gateway.
std::vector<Position> gen_unbalanced(int n_nodes, std::span<const Position> gateways,
                                     int hot_gw_index, double hot_radius_m,
                                     double spread_margin_m, RngStream& rng);

// Single gateway at the origin, all nodes uniform in a 50 m disc.
Scenario gen_single_gw(int n_nodes, RngStream& rng);

// Resolves a spec into a concrete Scenario (topology generated from the
// spec seed's topology stream) and validates it.
Scenario build_scenario(const ScenarioSpec& spec);

// JSON config round trip. load_scenario = parse + build + validate.
ScenarioSpec load_scenario_spec(const std::filesystem::path& file);
ScenarioSpec parse_scenario_spec(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& file);

// Writes the fully resolved form (explicit positions, every default
// spelled out), so loading it back reproduces the same scenario.
void save_scenario(const Scenario& scenario, const std::filesystem::path& file);
std::string scenario_to_json(const Scenario& scenario);

// CSV: kind,id,x,y for every gateway and node.
void write_scenario_csv(const Scenario& scenario, std::ostream& out);

}  // namespace admaiora
