#pragma once

#include <optional>
#include <span>

namespace admaiora {

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);  // 0 for fewer than 2 samples

// Two-sided 95% / one-sided 95% Student-t quantiles.
double t_quantile_975(int df);
double t_quantile_95(int df);

// Half-width of the 95% confidence interval; absent for a single sample.
std::optional<double> ci95_halfwidth(std::span<const double> xs);

}  // namespace admaiora
