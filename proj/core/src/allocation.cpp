#include "admaiora/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace admaiora {

const char* allocator_name(Allocator a) {
  switch (a) {
    case Allocator::AdrMgw: return "adr";
    case Allocator::ProbAdr: return "prob-adr";
    case Allocator::AdMaiora: return "admaiora";
  }
  return "?";
}

std::optional<Allocator> allocator_from_name(const std::string& name) {
  if (name == "adr" || name == "adr-mgw") return Allocator::AdrMgw;
  if (name == "prob-adr" || name == "prob_adr") return Allocator::ProbAdr;
  if (name == "admaiora" || name == "ad-maiora") return Allocator::AdMaiora;
  return std::nullopt;
}

PressureTable::PressureTable(int n_gateways)
    : n_gw_(n_gateways), v_(static_cast<std::size_t>(kNumSf) * n_gateways, 0.0) {
  if (n_gateways <= 0) throw std::invalid_argument("pressure table needs at least one gateway");
}

double PressureTable::gateway_max(int gw) const {
  double m = -std::numeric_limits<double>::infinity();
  for (int sf = kSfMin; sf <= kSfMax; ++sf) m = std::max(m, at(sf, gw));
  return m;
}

std::pair<int, int> PressureTable::argmax_cell() const {
  int best_sf = kSfMin;
  int best_gw = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int gw = 0; gw < n_gw_; ++gw) {
    for (int sf = kSfMin; sf <= kSfMax; ++sf) {
      if (at(sf, gw) > best) {
        best = at(sf, gw);
        best_sf = sf;
        best_gw = gw;
      }
    }
  }
  return {best_sf, best_gw};
}

Assignment adr_mgw(const RssiMatrix& rssi, const SensitivityTable& sens, int bw_hz) {
  Assignment a;
  a.provenance = Allocator::AdrMgw;
  a.sf.resize(rssi.n_nodes(), kDisconnected);
  for (int n = 0; n < rssi.n_nodes(); ++n) {
    for (int sf = kSfMin; sf <= kSfMax && a.sf[n] == kDisconnected; ++sf) {
      for (int gw = 0; gw < rssi.n_gateways(); ++gw) {
        if (audible(rssi, sens, gw, n, sf, bw_hz)) {
          a.sf[n] = sf;
          break;
        }
      }
    }
  }
  return a;
}

Assignment probabilistic_adr(const RssiMatrix& rssi, const SensitivityTable& sens, int bw_hz,
                             const SfCostVector& sf_cost, RngStream& rng) {
  Assignment a = adr_mgw(rssi, sens, bw_hz);
  a.provenance = Allocator::ProbAdr;
  for (int n = 0; n < a.n_nodes(); ++n) {
    if (!a.connected(n)) continue;
    const int min_sf = a.sf[n];
    double total = 0.0;
    for (int sf = min_sf; sf <= kSfMax; ++sf) total += 1.0 / sf_cost[sf_index(sf)];
    const double u = rng.uniform01() * total;
    double acc = 0.0;
    int chosen = kSfMax;
    for (int sf = min_sf; sf <= kSfMax; ++sf) {
      acc += 1.0 / sf_cost[sf_index(sf)];
      if (u < acc) {
        chosen = sf;
        break;
      }
    }
    a.sf[n] = chosen;
  }
  return a;
}

PressureTable compute_pressure(const Assignment& assignment, const RssiMatrix& rssi,
                               const SensitivityTable& sens, int bw_hz,
                               std::span<const ChannelParams> node_params,
                               std::span<const double> rate_weights) {
  if (assignment.n_nodes() != rssi.n_nodes() ||
      assignment.n_nodes() != static_cast<int>(node_params.size())) {
    throw std::invalid_argument("assignment, rssi matrix and node params disagree on node count");
  }
  PressureTable press(rssi.n_gateways());
  for (int n = 0; n < assignment.n_nodes(); ++n) {
    if (!assignment.connected(n)) continue;
    const int sf = assignment.sf[n];
    const double at = airtime_ms(node_params[n].at_sf(sf));
    const double weight = rate_weights.empty() ? 1.0 : rate_weights[n];
    bool heard_anywhere = false;
    for (int gw = 0; gw < rssi.n_gateways(); ++gw) {
      if (audible(rssi, sens, gw, n, sf, bw_hz)) {
        press.at(sf, gw) += at * weight;
        heard_anywhere = true;
      }
    }
    if (!heard_anywhere) {
      throw std::runtime_error("infeasible assignment: node " + std::to_string(n) +
                               " is heard by no gateway at SF" + std::to_string(sf));
    }
  }
  return press;
}

std::optional<CandidateMove> best_node(const RssiMatrix& rssi, const SensitivityTable& sens,
                                       int bw_hz, const std::vector<int>& sfmap,
                                       const PressureTable& sfpress,
                                       const std::vector<bool>& frozen) {
  const auto [w_sf, worst_gw] = sfpress.argmax_cell();

  std::optional<CandidateMove> best;
  for (int n = 0; n < static_cast<int>(sfmap.size()); ++n) {
    if (frozen[n] || sfmap[n] != w_sf) continue;
    if (!audible(rssi, sens, worst_gw, n, w_sf, bw_hz)) continue;

    double w_n = 0.0;
    for (int gw = 0; gw < rssi.n_gateways(); ++gw) {
      const double lambda = sfpress.gateway_max(gw);
      double slack = std::numeric_limits<double>::infinity();
      bool any = false;
      for (int sf_star = w_sf + 1; sf_star <= kSfMax; ++sf_star) {
        if (!audible(rssi, sens, gw, n, sf_star, bw_hz)) continue;
        slack = std::min(slack, lambda - sfpress.at(sf_star, gw));
        any = true;
      }
      if (any) w_n += slack;  // a gateway hearing the node at no sf* adds 0
    }
    if (!best || w_n > best->weight_ms) best = CandidateMove{n, w_sf, w_n};
  }
  return best;
}

SfChoice best_sf(const CandidateMove& candidate, const RssiMatrix& rssi,
                 const SensitivityTable& sens, int bw_hz, const PressureTable& sfpress,
                 const SfCostVector& sf_cost) {
  SfChoice choice;
  for (int sf_star = candidate.overloaded_sf + 1; sf_star <= kSfMax; ++sf_star) {
    double worst = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int gw = 0; gw < rssi.n_gateways(); ++gw) {
      if (!audible(rssi, sens, gw, candidate.node, sf_star, bw_hz)) continue;
      const double lambda = sfpress.gateway_max(gw);
      worst = std::min(worst, lambda - sfpress.at(sf_star, gw) - sf_cost[sf_index(sf_star)]);
      any = true;
    }
    if (any && worst > choice.free_airtime_ms) {
      choice.free_airtime_ms = worst;
      choice.sf = sf_star;
    }
  }
  return choice;
}

Assignment ad_maiora(const RssiMatrix& rssi, const SensitivityTable& sens,
                     const SfCostVector& sf_cost, int bw_hz,
                     std::span<const ChannelParams> node_params,
                     std::vector<CommittedMove>* trace) {
  Assignment assignment = adr_mgw(rssi, sens, bw_hz);
  assignment.provenance = Allocator::AdMaiora;

  const int n_nodes = assignment.n_nodes();
  std::vector<bool> frozen(n_nodes, false);
  if (trace) trace->clear();

  // Each pass freezes exactly one node (moved or stuck), so 2N iterations
  // can only be exceeded by a bug.
  const int max_iterations = 2 * n_nodes + 1;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const PressureTable press =
        compute_pressure(assignment, rssi, sens, bw_hz, node_params);
    const auto candidate = best_node(rssi, sens, bw_hz, assignment.sf, press, frozen);
    if (!candidate) return assignment;

    const SfChoice choice = best_sf(*candidate, rssi, sens, bw_hz, press, sf_cost);
    if (choice.free_airtime_ms > 0.0 && choice.sf) {
      if (trace) {
        trace->push_back(CommittedMove{candidate->node, candidate->overloaded_sf, *choice.sf,
                                       choice.free_airtime_ms});
      }
      assignment.sf[candidate->node] = *choice.sf;
    }
    frozen[candidate->node] = true;  // commit is final; a stuck node stays put
  }
  throw std::logic_error("ad_maiora failed to terminate within 2N iterations");
}

SfHistogram sf_histogram(const Assignment& assignment) {
  SfHistogram h;
  for (int n = 0; n < assignment.n_nodes(); ++n) {
    if (assignment.connected(n)) {
      ++h.count[sf_index(assignment.sf[n])];
    } else {
      ++h.disconnected;
    }
  }
  return h;
}

void write_assignment_csv(const Assignment& assignment, std::ostream& out) {
  out << "node,sf,provenance\n";
  for (int n = 0; n < assignment.n_nodes(); ++n) {
    out << n << ',' << assignment.sf[n] << ',' << allocator_name(assignment.provenance) << '\n';
  }
}

}  // namespace admaiora
