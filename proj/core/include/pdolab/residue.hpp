#pragma once

#include <span>
#include <string>
#include <vector>

#include "pdolab/quadrature.hpp"
#include "pdolab/symbol.hpp"
#include "pdolab/trend.hpp"

namespace pdolab {

/// What is integrated over x_support x {r_lo <= |xi| <= r_hi}.
enum class ShellIntegrand { value, magnitude, magnitude_squared };

/// Integral of p, |p| or |p|^2 over x_support x {exp(log_r_lo) <= |xi| <= exp(log_r_hi)}.
/// Radii are passed as logarithms so shells beyond double range (|xi| ~ 10^1000)
/// stay addressable; use -infinity for the origin.
///
/// Radial quadrature: Gauss-Legendre panels in |xi| on [0, 1], then panels in
/// log|xi| (nodes proportional to exp(uniform)), split at the symbol's radial
/// breakpoints. Classical symbols integrate the homogeneous range analytically;
/// product symbols separate into an x-integral times a xi-integral.
Complex shell_integral(const Symbol& sym, double log_r_lo, double log_r_hi, ShellIntegrand what,
                       const QuadSpec& quad = {});

/// Integral of p over x_support x {|xi| <= R}.
Complex ball_integral(const Symbol& sym, double radius, const QuadSpec& quad = {});
Complex ball_integral_log_radius(const Symbol& sym, double log_radius, const QuadSpec& quad = {});

/// Representative Res_n = d V(n) / log(1+n) of the residue class, where
/// V(n) is the ball integral at radius n^{1/d}. The grid is carried as
/// log n so that doubly-exponential grids do not overflow; n holds the
/// integer value when representable and +inf otherwise.
struct ResidueSeries {
  int d = 1;
  std::vector<double> n;
  std::vector<double> log_n;
  std::vector<Complex> ball_integral;
  std::vector<Complex> res;

  std::size_t size() const { return res.size(); }
};

ResidueSeries residue_series(const Symbol& sym, std::span<const double> n_grid, const QuadSpec& quad = {});
ResidueSeries residue_series_log(const Symbol& sym, std::span<const double> log_n_grid,
                                 const QuadSpec& quad = {});

/// log n for n = ceil(exp(exp(t))). When exp(exp(t)) is past 2^53 the ceiling
/// is below double resolution and log n = exp(t).
double doubly_exponential_log_n(double t);
std::vector<double> doubly_exponential_log_grid(std::span<const double> t_grid);

/// log(1 + n) given log n, stable for astronomically large n.
double log1p_from_log(double log_n);

/// Integral over x_support x S^{d-1} of the principal symbol. Only defined
/// for classical symbols; throws InvalidArgument otherwise.
Complex wodzicki_residue(const Symbol& sym, const QuadSpec& quad = {});

struct ModulatedNormReport {
  double value = 0.0;  ///< lower bound for ||p||_{L2} + sup_t t^{d/2} ||p 1_{|xi|>=t}||_{L2}
  double l2_norm = 0.0;
  std::vector<double> t;
  std::vector<double> tail_terms;
  TrendReport tail_trend;  ///< tail_terms against log t
  bool modulated = true;
  std::string diagnostic;
};

/// Modulated norm evaluated over a finite t-grid (so a lower bound for the
/// supremum). Flags "not a modulated symbol" when the L2 tail does not
/// converge or the tail terms keep growing with t.
ModulatedNormReport modulated_norm(const Symbol& sym, std::span<const double> t_grid,
                                   const QuadSpec& quad = {}, double growth_slope_threshold = 0.05);

}  // namespace pdolab
