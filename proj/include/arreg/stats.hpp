#pragma once

#include <cstdint>
#include <span>

namespace arreg {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double p) const noexcept { return lo <= p && p <= hi; }
};

/// Wilson score interval for `successes` out of `trials` at z standard
/// deviations (1.96 for 95%, 3.0 for the 3-sigma checks).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either sample is constant.
double spearman(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace arreg
