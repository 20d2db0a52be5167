#pragma once

#include <span>

namespace bwedge {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double value) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Slope of log(values) against log(sizes). Requires at least two positive pairs.
double log_log_slope(std::span<const double> sizes, std::span<const double> values);

/// max/min over a nonempty span of positive values.
double spread_ratio(std::span<const double> values);

}  // namespace bwedge
