#include "admaiora/airtime.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace admaiora {

namespace {

// Mathematical ceiling of a/b for b > 0: rounds toward +inf, so a negative
// quotient like -4/28 gives 0.
long long ceil_div(long long a, long long b) {
  return a > 0 ? (a + b - 1) / b : a / b;
}

}  // namespace

ChannelParams ChannelParams::at_sf(int new_sf) const {
  ChannelParams p = *this;
  p.sf = new_sf;
  if (p.auto_low_dr_opt) p.low_dr_opt = default_low_dr_opt(new_sf, p.bw_hz);
  return p;
}

void ChannelParams::validate() const {
  if (!valid_sf(sf)) throw std::invalid_argument("sf must be in 7..12, got " + std::to_string(sf));
  if (!valid_bw(bw_hz)) {
    throw std::invalid_argument("bw must be 125000, 250000 or 500000 Hz, got " +
                                std::to_string(bw_hz));
  }
  if (cr < 1 || cr > 4) throw std::invalid_argument("cr must be in 1..4, got " + std::to_string(cr));
  if (payload_bytes < 0) throw std::invalid_argument("payload_bytes must be non-negative");
  if (n_preamble < 1) throw std::invalid_argument("n_preamble must be positive");
  if (preamble_symbol_offset <= 0.0) throw std::invalid_argument("preamble offset must be positive");
}

double symbol_time_ms(int sf, int bw_hz) {
  if (!valid_sf(sf)) throw std::invalid_argument("sf must be in 7..12, got " + std::to_string(sf));
  if (!valid_bw(bw_hz)) {
    throw std::invalid_argument("bw must be 125000, 250000 or 500000 Hz, got " +
                                std::to_string(bw_hz));
  }
  return std::ldexp(1000.0, sf) / static_cast<double>(bw_hz);
}

int payload_symbols(const ChannelParams& params) {
  params.validate();
  const long long h = params.header_disabled ? 1 : 0;
  const long long de = params.low_dr_opt ? 1 : 0;
  const long long numerator = 8LL * params.payload_bytes - 4LL * params.sf + 44 - 20 * h;
  const long long denominator = 4 * (params.sf - 2 * de);
  const long long inner = ceil_div(numerator, denominator) * (params.cr + 4);
  return static_cast<int>(8 + std::max<long long>(inner, 0));
}

TimingBreakdown airtime(const ChannelParams& params) {
  TimingBreakdown t;
  t.t_sym_ms = symbol_time_ms(params.sf, params.bw_hz);
  t.t_preamble_ms = (params.n_preamble + params.preamble_symbol_offset) * t.t_sym_ms;
  t.payload_symbols = payload_symbols(params);
  t.t_payload_ms = t.payload_symbols * t.t_sym_ms;
  t.airtime_ms = t.t_preamble_ms + t.t_payload_ms;
  return t;
}

double airtime_ms(const ChannelParams& params) { return airtime(params).airtime_ms; }

double nominal_bitrate_bps(int sf, int bw_hz, int cr) {
  if (cr < 1 || cr > 4) throw std::invalid_argument("cr must be in 1..4, got " + std::to_string(cr));
  const double symbol_time_s = std::ldexp(1.0, sf) / static_cast<double>(bw_hz);
  return sf * (4.0 / (4.0 + cr)) / symbol_time_s;
}

SfCostVector sf_cost_vector(SfCostMode mode, const ChannelParams& reference) {
  if (mode == SfCostMode::Literal) return kLiteralSfCost;
  SfCostVector costs{};
  for (int sf = kSfMin; sf <= kSfMax; ++sf) {
    costs[sf_index(sf)] = airtime_ms(reference.at_sf(sf));
  }
  return costs;
}

}  // namespace admaiora
