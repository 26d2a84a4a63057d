#include "pdolab/trend.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pdolab/errors.hpp"

namespace pdolab {

double TrendReport::slope() const {
  return std::abs(slope_im) > std::abs(slope_re) ? slope_im : slope_re;
}

bool TrendReport::bounded(double slope_threshold) const {
  return std::isfinite(max_abs) && std::abs(slope_re) <= slope_threshold &&
         std::abs(slope_im) <= slope_threshold;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("least_squares_slope: size mismatch");
  if (x.size() < 2) return 0.0;
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

TrendReport trend_against(std::span<const double> x, std::span<const std::complex<double>> y) {
  std::vector<double> re(y.size()), im(y.size());
  TrendReport r;
  for (std::size_t i = 0; i < y.size(); ++i) {
    re[i] = y[i].real();
    im[i] = y[i].imag();
    r.max_abs = std::max(r.max_abs, std::abs(y[i]));
  }
  r.slope_re = least_squares_slope(x, re);
  r.slope_im = least_squares_slope(x, im);
  r.points = y.size();
  return r;
}

TrendReport trend_against(std::span<const double> x, std::span<const double> y) {
  TrendReport r;
  for (double v : y) r.max_abs = std::max(r.max_abs, std::abs(v));
  r.slope_re = least_squares_slope(x, y);
  r.points = y.size();
  return r;
}

}  // namespace pdolab
