#include "admaiora/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace admaiora {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

namespace {

// Student-t quantiles for df 1..30; the normal limit beyond.
constexpr double kT975[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                            2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                            2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                            2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
constexpr double kT95[] = {6.314, 2.920, 2.353, 2.132, 2.015, 1.943, 1.895, 1.860,
                           1.833, 1.812, 1.796, 1.782, 1.771, 1.761, 1.753, 1.746,
                           1.740, 1.734, 1.729, 1.725, 1.721, 1.717, 1.714, 1.711,
                           1.708, 1.706, 1.703, 1.701, 1.699, 1.697};

}  // namespace

double t_quantile_975(int df) {
  if (df < 1) throw std::invalid_argument("t quantile needs df >= 1");
  if (df <= 30) return kT975[df - 1];
  return 1.960;
}

double t_quantile_95(int df) {
  if (df < 1) throw std::invalid_argument("t quantile needs df >= 1");
  if (df <= 30) return kT95[df - 1];
  return 1.645;
}

std::optional<double> ci95_halfwidth(std::span<const double> xs) {
  if (xs.size() < 2) return std::nullopt;
  const int df = static_cast<int>(xs.size()) - 1;
  return t_quantile_975(df) * sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace admaiora
