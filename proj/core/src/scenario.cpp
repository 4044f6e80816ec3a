#include "admaiora/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace admaiora {

using nlohmann::json;

const char* topology_name(Topology t) {
  switch (t) {
    case Topology::Balanced: return "balanced";
    case Topology::Unbalanced: return "unbalanced";
    case Topology::Single: return "single";
  }
  return "?";
}

std::optional<Topology> topology_from_name(const std::string& name) {
  if (name == "balanced") return Topology::Balanced;
  if (name == "unbalanced") return Topology::Unbalanced;
  if (name == "single") return Topology::Single;
  return std::nullopt;
}

SfCostVector Scenario::sf_cost() const {
  ChannelParams reference = node_params.empty() ? ChannelParams{} : node_params.front();
  return sf_cost_vector(sf_cost_mode, reference);
}

RssiMatrix Scenario::build_rssi() const {
  RngStream shadow = RngStream(seed).derive(kShadowingStream);
  return build_rssi_matrix(nodes, gateways, path_loss, tx_power_dbm, shadow);
}

void Scenario::validate() const {
  if (gateways.empty()) throw std::invalid_argument("scenario needs at least one gateway");
  if (nodes.empty()) throw std::invalid_argument("scenario needs at least one node");
  if (node_params.size() != nodes.size()) {
    throw std::invalid_argument("scenario: node_params must match nodes");
  }
  for (const Position& p : nodes) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("scenario: node coordinates must be finite");
    }
  }
  for (const Position& p : gateways) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("scenario: gateway coordinates must be finite");
    }
  }
  path_loss.validate();
  sensitivity.validate();
  traffic.validate();
  for (const ChannelParams& p : node_params) p.validate();
  if (!valid_bw(bandwidth_hz)) throw std::invalid_argument("scenario: invalid bandwidth");
}

std::vector<Position> place_gateways(int n_gw, double spacing_m) {
  if (n_gw <= 0) throw std::invalid_argument("gateway count must be positive");
  if (spacing_m <= 0.0) throw std::invalid_argument("gateway spacing must be positive");
  const double s = spacing_m;
  switch (n_gw) {
    case 1: return {{0.0, 0.0}};
    case 2: return {{-s / 2, 0.0}, {s / 2, 0.0}};
    case 4: return {{-s / 2, -s / 2}, {s / 2, -s / 2}, {-s / 2, s / 2}, {s / 2, s / 2}};
    case 8: {
      std::vector<Position> gws;
      for (double y : {-s / 2, s / 2}) {
        for (double x : {-1.5 * s, -0.5 * s, 0.5 * s, 1.5 * s}) gws.push_back({x, y});
      }
      return gws;
    }
    default: {
      // centered near-square grid with the same pitch
      const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_gw))));
      const int rows = (n_gw + cols - 1) / cols;
      std::vector<Position> gws;
      for (int i = 0; i < n_gw; ++i) {
        const int r = i / cols;
        const int c = i % cols;
        gws.push_back({(c - (cols - 1) / 2.0) * s, (r - (rows - 1) / 2.0) * s});
      }
      // recenter on the true centroid (the last row may be partial)
      double cx = 0.0, cy = 0.0;
      for (const Position& p : gws) {
        cx += p.x;
        cy += p.y;
      }
      cx /= n_gw;
      cy /= n_gw;
      for (Position& p : gws) {
        p.x -= cx;
        p.y -= cy;
      }
      return gws;
    }
  }
}

namespace {

Position centroid(std::span<const Position> pts) {
  Position c;
  for (const Position& p : pts) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(pts.size());
  c.y /= static_cast<double>(pts.size());
  return c;
}

Position uniform_in_disc(const Position& center, double radius, RngStream& rng) {
  const double r = radius * std::sqrt(rng.uniform01());
  const double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

// Bounding box of the gateways inflated by the spread margin.
void spread_box(std::span<const Position> gateways, double margin, double* x0, double* x1,
                double* y0, double* y1) {
  *x0 = std::numeric_limits<double>::infinity();
  *x1 = -std::numeric_limits<double>::infinity();
  *y0 = std::numeric_limits<double>::infinity();
  *y1 = -std::numeric_limits<double>::infinity();
  for (const Position& p : gateways) {
    *x0 = std::min(*x0, p.x);
    *x1 = std::max(*x1, p.x);
    *y0 = std::min(*y0, p.y);
    *y1 = std::max(*y1, p.y);
  }
  *x0 -= margin;
  *x1 += margin;
  *y0 -= margin;
  *y1 += margin;
}

std::vector<Position> clustered_nodes(int n_nodes, std::span<const Position> gateways,
                                      const Position& hot_center, double hot_radius,
                                      double spread_margin, RngStream& rng) {
  if (n_nodes <= 0) throw std::invalid_argument("node count must be positive");
  // exact 60/40 split, rounding toward the central population
  const int n_spread = static_cast<int>(std::floor(0.4 * n_nodes));
  const int n_central = n_nodes - n_spread;

  std::vector<Position> nodes;
  nodes.reserve(n_nodes);
  for (int i = 0; i < n_central; ++i) nodes.push_back(uniform_in_disc(hot_center, hot_radius, rng));

  double x0, x1, y0, y1;
  spread_box(gateways, spread_margin, &x0, &x1, &y0, &y1);
  for (int i = 0; i < n_spread; ++i) {
    nodes.push_back({rng.uniform(x0, x1), rng.uniform(y0, y1)});
  }
  return nodes;
}

}  // namespace

std::vector<Position> gen_balanced(int n_nodes, std::span<const Position> gateways,
                                   double central_radius_m, double spread_margin_m,
                                   RngStream& rng) {
  return clustered_nodes(n_nodes, gateways, centroid(gateways), central_radius_m, spread_margin_m,
                         rng);
}

std::vector<Position> gen_unbalanced(int n_nodes, std::span<const Position> gateways,
                                     int hot_gw_index, double hot_radius_m,
                                     double spread_margin_m, RngStream& rng) {
  if (hot_gw_index < 0 || hot_gw_index >= static_cast<int>(gateways.size())) {
    throw std::invalid_argument("hot gateway index out of range");
  }
  return clustered_nodes(n_nodes, gateways, gateways[hot_gw_index], hot_radius_m, spread_margin_m,
                         rng);
}

Scenario gen_single_gw(int n_nodes, RngStream& rng) {
  if (n_nodes <= 0) throw std::invalid_argument("node count must be positive");
  Scenario s;
  s.gateways = {{0.0, 0.0}};
  s.nodes.reserve(n_nodes);
  for (int i = 0; i < n_nodes; ++i) s.nodes.push_back(uniform_in_disc({0.0, 0.0}, 50.0, rng));
  s.node_params.assign(n_nodes, ChannelParams{});
  s.seed = rng.seed();
  s.validate();
  return s;
}

Scenario build_scenario(const ScenarioSpec& spec) {
  Scenario s;
  s.path_loss = spec.path_loss;
  s.sensitivity = spec.sensitivity.value_or(SensitivityTable::defaults());
  s.tx_power_dbm = spec.tx_power_dbm;
  s.bandwidth_hz = spec.bandwidth_hz;
  s.channel_hz = spec.channel_hz;
  s.traffic = spec.traffic;
  s.traffic.payload_bytes = spec.payload_bytes;
  s.collision = spec.collision;
  s.sf_cost_mode = spec.sf_cost_mode;
  s.seed = spec.seed;

  if (spec.explicit_gateways) {
    s.gateways = *spec.explicit_gateways;
  } else if (spec.topology == Topology::Single) {
    s.gateways = {{0.0, 0.0}};
  } else {
    s.gateways = place_gateways(spec.n_gateways, spec.gateway_spacing_m);
  }

  RngStream topo = RngStream(spec.seed).derive(kTopologyStream);
  if (spec.explicit_nodes) {
    s.nodes = *spec.explicit_nodes;
  } else {
    switch (spec.topology) {
      case Topology::Balanced:
        s.nodes = gen_balanced(spec.n_nodes, s.gateways, spec.central_radius_m,
                               spec.spread_margin_m, topo);
        break;
      case Topology::Unbalanced:
        s.nodes = gen_unbalanced(spec.n_nodes, s.gateways, spec.hot_gateway, spec.hot_radius_m,
                                 spec.spread_margin_m, topo);
        break;
      case Topology::Single: {
        s.nodes.reserve(spec.n_nodes);
        if (spec.n_nodes <= 0) throw std::invalid_argument("node count must be positive");
        for (int i = 0; i < spec.n_nodes; ++i) {
          s.nodes.push_back(uniform_in_disc({0.0, 0.0}, spec.hot_radius_m, topo));
        }
        break;
      }
    }
  }

  ChannelParams p;
  p.bw_hz = spec.bandwidth_hz;
  p.cr = spec.cr;
  p.payload_bytes = spec.payload_bytes;
  p.n_preamble = spec.n_preamble;
  p.preamble_symbol_offset = spec.preamble_symbol_offset;
  if (spec.low_dr_opt) {
    p.auto_low_dr_opt = false;
    p.low_dr_opt = *spec.low_dr_opt;
  } else {
    p.low_dr_opt = default_low_dr_opt(p.sf, p.bw_hz);
  }
  s.node_params.assign(s.nodes.size(), p);

  s.validate();
  return s;
}

namespace {

json position_list_to_json(std::span<const Position> pts) {
  json arr = json::array();
  for (const Position& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<Position> positions_from_json(const json& arr) {
  std::vector<Position> pts;
  for (const auto& e : arr) pts.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  return pts;
}

SensitivityTable sensitivity_from_json(const json& j) {
  auto col = [&](const char* key, SensitivityTable::Column fallback) {
    if (!j.contains(key)) return fallback;
    SensitivityTable::Column c{};
    const auto& arr = j.at(key);
    if (arr.size() != kNumSf) {
      throw std::invalid_argument(std::string("sensitivity column '") + key +
                                  "' must list 6 thresholds (SF7..SF12)");
    }
    for (int i = 0; i < kNumSf; ++i) c[i] = arr.at(i).get<double>();
    return c;
  };
  const SensitivityTable defaults = SensitivityTable::defaults();
  return SensitivityTable(col("bw125", defaults.column(125000)),
                          col("bw250", defaults.column(250000)),
                          col("bw500", defaults.column(500000)));
}

json sensitivity_to_json(const SensitivityTable& t) {
  json j;
  for (auto [key, bw] : {std::pair{"bw125", 125000}, {"bw250", 250000}, {"bw500", 500000}}) {
    json col = json::array();
    for (double v : t.column(bw)) col.push_back(v);
    j[key] = col;
  }
  return j;
}

}  // namespace

ScenarioSpec parse_scenario_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario config parse error: ") + e.what());
  }

  ScenarioSpec spec;
  spec.n_nodes = j.value("n_nodes", spec.n_nodes);
  spec.n_gateways = j.value("n_gateways", spec.n_gateways);
  if (j.contains("topology")) {
    const auto t = topology_from_name(j.at("topology").get<std::string>());
    if (!t) throw std::invalid_argument("unknown topology: " + j.at("topology").get<std::string>());
    spec.topology = *t;
  }
  spec.hot_gateway = j.value("hot_gateway", spec.hot_gateway);
  spec.gateway_spacing_m = j.value("gateway_spacing_m", spec.gateway_spacing_m);
  spec.central_radius_m = j.value("central_radius_m", spec.central_radius_m);
  spec.hot_radius_m = j.value("hot_radius_m", spec.hot_radius_m);
  spec.spread_margin_m = j.value("spread_margin_m", spec.spread_margin_m);
  spec.seed = j.value("seed", spec.seed);

  if (j.contains("radio")) {
    const json& r = j.at("radio");
    spec.tx_power_dbm = r.value("tx_power_dbm", spec.tx_power_dbm);
    if (r.contains("path_loss")) {
      const json& pl = r.at("path_loss");
      spec.path_loss.l0_db = pl.value("l0_db", spec.path_loss.l0_db);
      spec.path_loss.d0_m = pl.value("d0_m", spec.path_loss.d0_m);
      spec.path_loss.gamma = pl.value("gamma", spec.path_loss.gamma);
      spec.path_loss.sigma2_db2 = pl.value("sigma2_db2", spec.path_loss.sigma2_db2);
    }
    if (r.contains("sensitivity_dbm")) {
      spec.sensitivity = sensitivity_from_json(r.at("sensitivity_dbm"));
    }
    spec.collision.capture_threshold_db =
        r.value("capture_threshold_db", spec.collision.capture_threshold_db);
    spec.collision.preamble_critical_section =
        r.value("preamble_critical_section", spec.collision.preamble_critical_section);
  }

  if (j.contains("channel")) {
    const json& c = j.at("channel");
    spec.bandwidth_hz = c.value("bandwidth_hz", spec.bandwidth_hz);
    spec.channel_hz = c.value("carrier_hz", spec.channel_hz);
    spec.cr = c.value("cr", spec.cr);
    spec.payload_bytes = c.value("payload_bytes", spec.payload_bytes);
    spec.n_preamble = c.value("n_preamble", spec.n_preamble);
    spec.preamble_symbol_offset = c.value("preamble_symbol_offset", spec.preamble_symbol_offset);
    if (c.contains("low_dr_opt")) {
      const json& de = c.at("low_dr_opt");
      if (de.is_string() && de.get<std::string>() == "auto") {
        spec.low_dr_opt.reset();
      } else {
        spec.low_dr_opt = de.get<bool>();
      }
    }
  }

  if (j.contains("traffic")) {
    const json& t = j.at("traffic");
    spec.traffic.message_period_s = t.value("message_period_s", spec.traffic.message_period_s);
    spec.traffic.duty_cycle = t.value("duty_cycle", spec.traffic.duty_cycle);
    spec.traffic.sim_duration_s = t.value("sim_duration_s", spec.traffic.sim_duration_s);
    if (t.contains("arrival")) {
      const std::string law = t.at("arrival").get<std::string>();
      if (law == "exponential") {
        spec.traffic.arrival = TrafficConfig::Arrival::Exponential;
      } else if (law == "fixed") {
        spec.traffic.arrival = TrafficConfig::Arrival::FixedPeriod;
      } else {
        throw std::invalid_argument("arrival must be 'exponential' or 'fixed', got " + law);
      }
    }
  }
  spec.traffic.payload_bytes = spec.payload_bytes;

  if (j.contains("sf_cost_mode")) {
    const std::string mode = j.at("sf_cost_mode").get<std::string>();
    if (mode == "computed") {
      spec.sf_cost_mode = SfCostMode::Computed;
    } else if (mode == "literal") {
      spec.sf_cost_mode = SfCostMode::Literal;
    } else {
      throw std::invalid_argument("sf_cost_mode must be 'computed' or 'literal', got " + mode);
    }
  }

  if (j.contains("gateways")) spec.explicit_gateways = positions_from_json(j.at("gateways"));
  if (j.contains("nodes")) spec.explicit_nodes = positions_from_json(j.at("nodes"));
  return spec;
}

ScenarioSpec load_scenario_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open scenario config: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_spec(buf.str());
}

Scenario load_scenario(const std::filesystem::path& file) {
  return build_scenario(load_scenario_spec(file));
}

std::string scenario_to_json(const Scenario& s) {
  const ChannelParams& p = s.node_params.front();
  json j;
  j["n_nodes"] = s.n_nodes();
  j["n_gateways"] = s.n_gateways();
  j["seed"] = s.seed;
  j["gateways"] = position_list_to_json(s.gateways);
  j["nodes"] = position_list_to_json(s.nodes);
  j["radio"] = {
      {"tx_power_dbm", s.tx_power_dbm},
      {"path_loss",
       {{"l0_db", s.path_loss.l0_db},
        {"d0_m", s.path_loss.d0_m},
        {"gamma", s.path_loss.gamma},
        {"sigma2_db2", s.path_loss.sigma2_db2}}},
      {"sensitivity_dbm", sensitivity_to_json(s.sensitivity)},
      {"capture_threshold_db", s.collision.capture_threshold_db},
      {"preamble_critical_section", s.collision.preamble_critical_section},
  };
  j["channel"] = {
      {"bandwidth_hz", s.bandwidth_hz},
      {"carrier_hz", s.channel_hz},
      {"cr", p.cr},
      {"payload_bytes", p.payload_bytes},
      {"n_preamble", p.n_preamble},
      {"preamble_symbol_offset", p.preamble_symbol_offset},
  };
  if (p.auto_low_dr_opt) {
    j["channel"]["low_dr_opt"] = "auto";
  } else {
    j["channel"]["low_dr_opt"] = p.low_dr_opt;
  }
  j["traffic"] = {
      {"message_period_s", s.traffic.message_period_s},
      {"duty_cycle", s.traffic.duty_cycle},
      {"sim_duration_s", s.traffic.sim_duration_s},
      {"arrival",
       s.traffic.arrival == TrafficConfig::Arrival::Exponential ? "exponential" : "fixed"},
  };
  j["sf_cost_mode"] = s.sf_cost_mode == SfCostMode::Computed ? "computed" : "literal";
  return j.dump(2);
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write scenario config: " + file.string());
  out << scenario_to_json(scenario) << '\n';
}

void write_scenario_csv(const Scenario& scenario, std::ostream& out) {
  out << "kind,id,x,y\n";
  for (int i = 0; i < scenario.n_gateways(); ++i) {
    out << "gateway," << i << ',' << scenario.gateways[i].x << ',' << scenario.gateways[i].y
        << '\n';
  }
  for (int i = 0; i < scenario.n_nodes(); ++i) {
    out << "node," << i << ',' << scenario.nodes[i].x << ',' << scenario.nodes[i].y << '\n';
  }
}

}  // namespace admaiora
