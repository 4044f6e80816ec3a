#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "admaiora/airtime.hpp"
#include "admaiora/rng.hpp"

namespace admaiora {

struct Position {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Position&) const = default;
};

double distance_m(const Position& a, const Position& b);

// Log-distance path loss with optional log-normal shadowing:
//   L(d) = l0 + 10 * gamma * log10(d / d0) + X,  X ~ N(0, sigma2).
struct PathLossModel {
  double l0_db = 127.41;
  double d0_m = 40.0;
  double gamma = 2.08;
  double sigma2_db2 = 0.0;

  void validate() const;
};

// Shadowing draws come from the supplied stream; with sigma2 = 0 (or no
// stream) the deterministic mean loss is returned and no draw is consumed.
double path_loss_db(const PathLossModel& model, double distance_m, RngStream* rng = nullptr);
double rssi_dbm(double tx_power_dbm, const PathLossModel& model, double distance_m,
                RngStream* rng = nullptr);

// Demodulation thresholds, dBm, per SF (rows 7..12) and bandwidth.
// Each column must be strictly decreasing in SF so that raising the SF never
// shrinks the set of reachable gateways.
class SensitivityTable {
 public:
  using Column = std::array<double, kNumSf>;

  SensitivityTable(Column bw125, Column bw250, Column bw500);
  static SensitivityTable defaults();

  double threshold_dbm(int sf, int bw_hz) const;
  const Column& column(int bw_hz) const;

  void validate() const;  // throws std::invalid_argument naming the violation

 private:
  Column bw125_, bw250_, bw500_;
};

// Received power per (gateway, node), dBm.
class RssiMatrix {
 public:
  RssiMatrix(int n_gateways, int n_nodes);

  double& at(int gw, int node) { return v_[static_cast<std::size_t>(gw) * n_nodes_ + node]; }
  double at(int gw, int node) const { return v_[static_cast<std::size_t>(gw) * n_nodes_ + node]; }

  int n_gateways() const { return n_gw_; }
  int n_nodes() const { return n_nodes_; }

 private:
  int n_gw_;
  int n_nodes_;
  std::vector<double> v_;
};

// Distances are clamped to 1 m before the path-loss evaluation.
RssiMatrix build_rssi_matrix(std::span<const Position> nodes, std::span<const Position> gateways,
                             const PathLossModel& model, double tx_power_dbm, RngStream& rng);

// Small set of spreading factors, bitmask over SF7..SF12.
class SfSet {
 public:
  void insert(int sf) { bits_ |= static_cast<std::uint8_t>(1u << sf_index(sf)); }
  bool contains(int sf) const { return (bits_ >> sf_index(sf)) & 1u; }
  bool empty() const { return bits_ == 0; }

  // Lowest SF in the set; call only when not empty.
  int min_sf() const;

  bool operator==(const SfSet&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

bool audible(const RssiMatrix& rssi, const SensitivityTable& sens, int gw, int node, int sf,
             int bw_hz);

// SFs at which gateway `gw` can demodulate node `node`. Upward-closed in SF
// whenever the sensitivity column is monotone.
SfSet reachable_sfs_at(const RssiMatrix& rssi, const SensitivityTable& sens, int gw, int node,
                       int bw_hz);

// One SfSet per gateway.
std::vector<SfSet> reachable_sfs(const RssiMatrix& rssi, const SensitivityTable& sens, int node,
                                 int bw_hz);

}  // namespace admaiora
