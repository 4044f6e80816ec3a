#pragma once

#include <array>

namespace admaiora {

inline constexpr int kSfMin = 7;
inline constexpr int kSfMax = 12;
inline constexpr int kNumSf = kSfMax - kSfMin + 1;

// The LoRa preamble lasts (n_preamble + offset) symbols. Transceiver
// datasheets commonly quote 4.25; the default here is 4.24 and the value is
// configurable through ChannelParams / the scenario config.
inline constexpr double kDefaultPreambleSymbolOffset = 4.24;

constexpr bool valid_sf(int sf) { return sf >= kSfMin && sf <= kSfMax; }
constexpr bool valid_bw(int bw_hz) {
  return bw_hz == 125000 || bw_hz == 250000 || bw_hz == 500000;
}
constexpr int sf_index(int sf) { return sf - kSfMin; }

// Low Data Rate Optimization is switched on for the two slowest spreading
// factors at 125 kHz, the usual LoRaWAN practice.
constexpr bool default_low_dr_opt(int sf, int bw_hz) {
  return sf >= 11 && bw_hz == 125000;
}

// Per-message radio configuration.
struct ChannelParams {
  int sf = 7;
  int bw_hz = 125000;
  int cr = 1;  // code rate 4/(4+cr), cr in 1..4
  int payload_bytes = 20;
  bool header_disabled = false;  // H flag (false = explicit header)
  bool low_dr_opt = false;       // DE flag
  bool auto_low_dr_opt = true;   // when set, DE follows default_low_dr_opt on at_sf()
  int n_preamble = 8;
  double preamble_symbol_offset = kDefaultPreambleSymbolOffset;

  // Copy with a different SF; reapplies the DE policy unless auto_low_dr_opt
  // was cleared (explicit DE override).
  ChannelParams at_sf(int new_sf) const;

  void validate() const;  // throws std::invalid_argument on bad fields
};

struct TimingBreakdown {
  double t_sym_ms = 0.0;
  double t_preamble_ms = 0.0;
  int payload_symbols = 0;
  double t_payload_ms = 0.0;
  double airtime_ms = 0.0;  // t_preamble_ms + t_payload_ms, exactly
};

// T_sym = 2^sf / bw, in milliseconds.
double symbol_time_ms(int sf, int bw_hz);

// Number of symbols carrying payload + header,
//   8 + max(ceil((8 PL - 4 SF + 44 - 20 H) / (4 (SF - 2 DE))) * (CR + 4), 0),
// with a mathematical ceiling (rounds toward +inf, so ceil(-0.14) = 0).
int payload_symbols(const ChannelParams& params);

// Full frame timing: preamble (n_preamble + offset symbols) plus payload.
TimingBreakdown airtime(const ChannelParams& params);
double airtime_ms(const ChannelParams& params);

// R = SF * (4 / (4 + cr)) / (2^SF / BW), in bit/s.
double nominal_bitrate_bps(int sf, int bw_hz, int cr);

using SfCostVector = std::array<double, kNumSf>;

// Relative air-time weights per SF, indexed SF7..SF12.
enum class SfCostMode {
  // The conventional normalized weights (SF7 = 1.0).
  Literal,
  // Real per-message air time in milliseconds for the reference params,
  // so costs and pressure-table entries share units. Default everywhere.
  Computed,
};

inline constexpr SfCostVector kLiteralSfCost = {1.0, 2.0, 3.56, 7.12, 14.23, 24.93};

SfCostVector sf_cost_vector(SfCostMode mode, const ChannelParams& reference);

}  // namespace admaiora
