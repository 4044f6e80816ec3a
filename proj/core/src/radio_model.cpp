#include "admaiora/radio_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace admaiora {

double distance_m(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

void PathLossModel::validate() const {
  if (d0_m <= 0.0) throw std::invalid_argument("path loss d0 must be positive");
  if (gamma <= 0.0) throw std::invalid_argument("path loss exponent must be positive");
  if (sigma2_db2 < 0.0) throw std::invalid_argument("shadowing variance must be non-negative");
}

double path_loss_db(const PathLossModel& model, double distance_m, RngStream* rng) {
  if (distance_m <= 0.0) throw std::invalid_argument("path loss requires distance > 0");
  double loss = model.l0_db + 10.0 * model.gamma * std::log10(distance_m / model.d0_m);
  if (model.sigma2_db2 > 0.0 && rng != nullptr) {
    loss += rng->normal(0.0, std::sqrt(model.sigma2_db2));
  }
  return loss;
}

double rssi_dbm(double tx_power_dbm, const PathLossModel& model, double distance_m,
                RngStream* rng) {
  return tx_power_dbm - path_loss_db(model, distance_m, rng);
}

SensitivityTable::SensitivityTable(Column bw125, Column bw250, Column bw500)
    : bw125_(bw125), bw250_(bw250), bw500_(bw500) {
  validate();
}

SensitivityTable SensitivityTable::defaults() {
  // 125 kHz column from SX127x-class figures; wider bandwidths raise the
  // noise floor by 3 dB per doubling.
  Column bw125 = {-123.0, -126.0, -129.0, -132.0, -134.5, -137.0};
  Column bw250{};
  Column bw500{};
  for (int i = 0; i < kNumSf; ++i) {
    bw250[i] = bw125[i] + 3.0;
    bw500[i] = bw125[i] + 6.0;
  }
  return SensitivityTable(bw125, bw250, bw500);
}

double SensitivityTable::threshold_dbm(int sf, int bw_hz) const {
  return column(bw_hz)[sf_index(sf)];
}

const SensitivityTable::Column& SensitivityTable::column(int bw_hz) const {
  switch (bw_hz) {
    case 125000: return bw125_;
    case 250000: return bw250_;
    case 500000: return bw500_;
    default:
      throw std::invalid_argument("bw must be 125000, 250000 or 500000 Hz, got " +
                                  std::to_string(bw_hz));
  }
}

void SensitivityTable::validate() const {
  const Column* cols[] = {&bw125_, &bw250_, &bw500_};
  const char* names[] = {"125 kHz", "250 kHz", "500 kHz"};
  for (int c = 0; c < 3; ++c) {
    for (int i = 1; i < kNumSf; ++i) {
      if (!((*cols[c])[i] < (*cols[c])[i - 1])) {
        throw std::invalid_argument(
            std::string("sensitivity table not strictly decreasing with SF in the ") + names[c] +
            " column (SF" + std::to_string(kSfMin + i) + " threshold must be below SF" +
            std::to_string(kSfMin + i - 1) + ")");
      }
    }
  }
}

RssiMatrix::RssiMatrix(int n_gateways, int n_nodes)
    : n_gw_(n_gateways),
      n_nodes_(n_nodes),
      v_(static_cast<std::size_t>(n_gateways) * n_nodes, 0.0) {
  if (n_gateways <= 0 || n_nodes <= 0) {
    throw std::invalid_argument("rssi matrix needs at least one gateway and one node");
  }
}

RssiMatrix build_rssi_matrix(std::span<const Position> nodes, std::span<const Position> gateways,
                             const PathLossModel& model, double tx_power_dbm, RngStream& rng) {
  if (nodes.empty() || gateways.empty()) {
    throw std::invalid_argument("rssi matrix needs at least one gateway and one node");
  }
  model.validate();
  RssiMatrix m(static_cast<int>(gateways.size()), static_cast<int>(nodes.size()));
  for (int gw = 0; gw < m.n_gateways(); ++gw) {
    for (int n = 0; n < m.n_nodes(); ++n) {
      const double d = std::max(distance_m(gateways[gw], nodes[n]), 1.0);
      m.at(gw, n) = rssi_dbm(tx_power_dbm, model, d, &rng);
    }
  }
  return m;
}

int SfSet::min_sf() const {
  for (int sf = kSfMin; sf <= kSfMax; ++sf) {
    if (contains(sf)) return sf;
  }
  throw std::logic_error("min_sf on an empty SfSet");
}

bool audible(const RssiMatrix& rssi, const SensitivityTable& sens, int gw, int node, int sf,
             int bw_hz) {
  return rssi.at(gw, node) >= sens.threshold_dbm(sf, bw_hz);
}

SfSet reachable_sfs_at(const RssiMatrix& rssi, const SensitivityTable& sens, int gw, int node,
                       int bw_hz) {
  SfSet set;
  for (int sf = kSfMin; sf <= kSfMax; ++sf) {
    if (audible(rssi, sens, gw, node, sf, bw_hz)) set.insert(sf);
  }
  return set;
}

std::vector<SfSet> reachable_sfs(const RssiMatrix& rssi, const SensitivityTable& sens, int node,
                                 int bw_hz) {
  std::vector<SfSet> sets(rssi.n_gateways());
  for (int gw = 0; gw < rssi.n_gateways(); ++gw) {
    sets[gw] = reachable_sfs_at(rssi, sens, gw, node, bw_hz);
  }
  return sets;
}

}  // namespace admaiora
