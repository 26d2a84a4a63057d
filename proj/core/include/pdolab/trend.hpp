#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace pdolab {

/// Finite-scale stand-in for an O(1) claim: the largest magnitude seen and
/// the least-squares slope against the chosen abscissa (log n or level).
struct TrendReport {
  double max_abs = 0.0;
  double slope_re = 0.0;
  double slope_im = 0.0;
  std::size_t points = 0;

  double slope() const;
  bool bounded(double slope_threshold) const;
};

double least_squares_slope(std::span<const double> x, std::span<const double> y);

TrendReport trend_against(std::span<const double> x, std::span<const std::complex<double>> y);
TrendReport trend_against(std::span<const double> x, std::span<const double> y);

}  // namespace pdolab
