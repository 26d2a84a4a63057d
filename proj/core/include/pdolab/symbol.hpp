#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pdolab {

using Complex = std::complex<double>;

/// p(x, xi) with x, xi in R^d.
using SymbolFn = std::function<Complex(std::span<const double> x, std::span<const double> xi)>;
/// Principal part p_{-d}(x, s) with s on the unit sphere.
using PrincipalFn = std::function<Complex(std::span<const double> x, std::span<const double> s)>;
/// A function of a single point in R^d.
using PointFn = std::function<Complex(std::span<const double> point)>;

/// Axis-aligned box [lo_1, hi_1] x ... x [lo_d, hi_d].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int d, double half_width, double center = 0.0);
  /// The full period cell [-pi, pi]^d; symbols on it are treated as periodic in x.
  static Box torus(int d);

  int dim() const { return static_cast<int>(lo.size()); }
  bool empty() const;
  bool contains(std::span<const double> x) const;
  double volume() const;
  /// Smallest distance from the box to the boundary of (-pi, pi)^d.
  double margin_inside_torus() const;
  bool is_torus_cell() const;
};

struct ClassicalKind {
  PrincipalFn principal;
  double cutoff_radius = 1.0;
};

struct ProductKind {
  PointFn f;
  PointFn g;
  /// g depends on |xi| only; lets integrals skip the angular quadrature.
  bool radial_g = false;
  /// Optional u -> e^{d u} g(e^u), the radial density in log|xi|, for radii
  /// that overflow double precision. Only meaningful when radial_g is set.
  std::function<double(double)> radial_log_density;
};

struct GeneralKind {};

using SymbolKind = std::variant<GeneralKind, ClassicalKind, ProductKind>;

/// An order -d symbol with compact x-support. Immutable after construction;
/// evaluation is pure and safe to call concurrently.
class Symbol {
 public:
  Symbol(int d, Box x_support, SymbolFn eval, SymbolKind kind = GeneralKind{},
         std::vector<double> radial_breakpoints = {}, std::string label = "symbol");

  int dim() const { return d_; }
  const Box& x_support() const { return support_; }
  const SymbolKind& kind() const { return kind_; }
  const std::string& label() const { return label_; }
  /// Radii |xi| where the symbol has a non-analytic join (cutoff ramps).
  std::span<const double> radial_breakpoints() const { return breaks_; }

  bool is_classical() const { return std::holds_alternative<ClassicalKind>(kind_); }
  bool is_product() const { return std::holds_alternative<ProductKind>(kind_); }
  const ClassicalKind* classical() const { return std::get_if<ClassicalKind>(&kind_); }
  const ProductKind* product() const { return std::get_if<ProductKind>(&kind_); }

  /// Zero outside x_support.
  Complex operator()(std::span<const double> x, std::span<const double> xi) const;

  Symbol scaled(Complex factor) const;
  Symbol with_label(std::string label) const;

  friend Symbol operator+(const Symbol& a, const Symbol& b);

 private:
  int d_;
  Box support_;
  SymbolFn eval_;
  SymbolKind kind_;
  std::vector<double> breaks_;
  std::string label_;
};

/// Classical symbol principal(x, xi/|xi|) |xi|^{-d} for |xi| >= cutoff_radius,
/// joined to zero by a quintic smoothstep in |xi| on [cutoff/2, cutoff].
Symbol make_classical_symbol(int d, PrincipalFn principal, double cutoff_radius, Box x_support);

/// f(x) g(xi) with f supported in x_support.
Symbol make_product_symbol(PointFn f, PointFn g, int d, Box x_support, bool radial_g = false,
                           std::vector<double> radial_breakpoints = {});

/// |phi(x)|^2 g(xi) (sin log log|xi| + cos log log|xi|) |xi|^{-d}, g the
/// smoothstep cutoff on [3, 4], phi a tensor bump on [-1, 1]^d scaled so that
/// the integral of |phi|^2 equals phi_norm_target (default 1 / Vol S^{d-1}).
Symbol make_nonmeasurable_symbol(int d, std::optional<double> phi_norm_target = std::nullopt);

/// Classical symbol with principal part 0 (Res_W = 0).
Symbol make_zero_symbol(int d);

/// Radial cutoff used by the non-measurable symbol: 0 for r <= 3, 1 for r >= 4.
double nonmeasurable_cutoff(double r);

/// Japanese bracket <xi>^{-s} = (1 + |xi|^2)^{-s/2}.
double japanese_bracket_power(std::span<const double> xi, double s);

/// Tensor bump amplitude * prod_i psi((x_i - c_i) / h), psi(t) = exp(-1/(1-t^2)).
struct Bump {
  std::vector<double> center;
  double half_width = 1.0;
  double amplitude = 1.0;

  int dim() const { return static_cast<int>(center.size()); }
  double operator()(std::span<const double> x) const;
  double integral() const;
  double l2_norm_squared() const;
  Box support() const;

  /// Bump with the given integral over R^d.
  static Bump with_integral(std::vector<double> center, double half_width, double integral);
};

/// Integral of psi over [-1, 1] and of psi^2, computed once to ~1e-15.
double bump_profile_integral();
double bump_profile_square_integral();

}  // namespace pdolab
