#include "bwedge/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bwedge/error.hpp"

namespace bwedge {

void CompensatedSum::add(double value) noexcept {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    fail(ErrorCode::IllegalParameter, "least squares needs two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::IllegalParameter, "least squares with constant abscissa");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double log_log_slope(std::span<const double> sizes, std::span<const double> values) {
  if (sizes.size() != values.size()) fail(ErrorCode::GridMismatch, "sizes and values differ in length");
  std::vector<double> lx, ly;
  lx.reserve(sizes.size());
  ly.reserve(values.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0.0) || !(values[i] > 0.0)) {
      fail(ErrorCode::IllegalParameter, "log-log fit requires positive sizes and values");
    }
    lx.push_back(std::log(sizes[i]));
    ly.push_back(std::log(values[i]));
  }
  return least_squares(lx, ly).slope;
}

double spread_ratio(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::IllegalParameter, "spread of empty range");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi / *lo;
}

}  // namespace bwedge
