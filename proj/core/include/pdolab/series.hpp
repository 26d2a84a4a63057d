#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace pdolab {

/// A bounded sequence a_n viewed through log n. Three backings:
///   dense     every integer n = 1..N (matrix-level partial sums),
///   sampled   a strictly increasing log n grid, linearly interpolated in log n,
///   function  evaluated on demand at any log n in its domain (symbol-level
///             residues, reaching n far beyond double range).
class Series {
 public:
  using Fn = std::function<std::complex<double>(double log_n)>;

  static Series dense(std::vector<std::complex<double>> values);
  static Series sampled(std::vector<double> log_n, std::vector<std::complex<double>> values);
  static Series function(Fn fn, double log_n_min, double log_n_max, std::size_t resolution = 512);

  double log_n_min() const { return log_min_; }
  double log_n_max() const { return log_max_; }
  bool is_dense() const { return kind_ == Kind::dense; }

  std::complex<double> at_log(double log_n) const;
  /// Exact lookup for dense series; at_log(log n) otherwise.
  std::complex<double> at(double n) const;

  /// Points (log n, value) with log n >= log_start that represent the series
  /// (every integer for dense, the grid for sampled, a uniform log n grid for
  /// function-backed series).
  void tail_points(double log_start, std::vector<double>& log_n, std::vector<std::complex<double>>& values) const;

 private:
  enum class Kind { dense, sampled, function };
  Kind kind_ = Kind::dense;
  std::vector<double> log_n_;
  std::vector<std::complex<double>> values_;
  Fn fn_;
  double log_min_ = 0.0;
  double log_max_ = 0.0;
  std::size_t resolution_ = 512;
};

}  // namespace pdolab
