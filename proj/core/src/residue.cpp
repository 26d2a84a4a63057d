#include "pdolab/residue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdolab/errors.hpp"

namespace pdolab {

namespace {

constexpr double kLinearRegionEnd = 1.0;   // |xi| below this uses panels in |xi|
constexpr double kLinearPanel = 0.25;
constexpr double kMaxLogRadiusForEval = 700.0;

// Radial nodes for the integral of h(r) r^{d-1} dr over [r_lo, r_hi]. Each node
// carries the radius (possibly via its log) and the full weight including
// r^{d-1} and the Jacobian e^u of the log substitution.
struct RadialNode {
  double log_r;
  double weight;
};

std::vector<RadialNode> radial_nodes(int d, double log_lo, double log_hi, std::span<const double> breaks,
                                     const QuadSpec& quad) {
  std::vector<RadialNode> out;
  if (!(log_hi > log_lo)) return out;
  const double log_split = std::log(kLinearRegionEnd);

  if (log_lo < log_split) {
    const double a = std::isinf(log_lo) ? 0.0 : std::exp(log_lo);
    const double b = std::exp(std::min(log_hi, log_split));
    const QuadratureRule rule = composite_gauss_legendre(a, b, quad.radial_nodes, kLinearPanel, breaks);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double r = rule.nodes[i];
      out.push_back({std::log(r), rule.weights[i] * std::pow(r, d - 1)});
    }
  }
  if (log_hi > log_split) {
    const double a = std::max(log_lo, log_split);
    std::vector<double> log_breaks;
    for (double b : breaks)
      if (b > 0.0) log_breaks.push_back(std::log(b));
    const QuadratureRule rule =
        composite_gauss_legendre(a, log_hi, quad.radial_nodes, quad.log_panel_width, log_breaks);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      // r^{d-1} dr = e^{d u} du
      out.push_back({rule.nodes[i], rule.weights[i]});
    }
  }
  return out;
}

// Weight for a log-region node still needs e^{d u}; linear nodes already
// include r^{d-1}. Distinguish by whether the node lies below log(1).
double radial_measure(int d, const RadialNode& node) {
  if (node.log_r < std::log(kLinearRegionEnd)) return node.weight;
  return node.weight * std::exp(d * node.log_r);
}

Complex apply(ShellIntegrand what, Complex v) {
  switch (what) {
    case ShellIntegrand::value: return v;
    case ShellIntegrand::magnitude: return {std::abs(v), 0.0};
    case ShellIntegrand::magnitude_squared: return {std::norm(v), 0.0};
  }
  return v;
}

void require_finite(Complex v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw NumericalError(std::string("non-finite quadrature value in ") + what);
}

// x-integral of T(f) over the support box.
Complex x_integral(const Symbol& sym, const std::function<Complex(std::span<const double>)>& fn,
                   const QuadSpec& quad) {
  const Box& box = sym.x_support();
  const TensorRule rule = tensor_gauss_legendre(box.lo, box.hi, quad.x_nodes_for(sym.dim()));
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * fn(rule.point(i));
  return s;
}

void check_eval_range(double log_hi) {
  if (log_hi > kMaxLogRadiusForEval)
    throw NumericalError("shell radius exceeds double range and the symbol has no log-radial density");
}

Complex product_xi_integral(const Symbol& sym, const ProductKind& pk, double log_lo, double log_hi,
                            ShellIntegrand what, const QuadSpec& quad) {
  const int d = sym.dim();
  if (pk.radial_g && pk.radial_log_density && what == ShellIntegrand::value) {
    // Linear region via g itself, log region via the density (no overflow).
    Complex s{0.0, 0.0};
    const double vol = sphere_volume(d);
    std::vector<double> xi(static_cast<std::size_t>(d), 0.0);
    for (const RadialNode& node : radial_nodes(d, log_lo, log_hi, sym.radial_breakpoints(), quad)) {
      if (node.log_r < std::log(kLinearRegionEnd)) {
        xi[0] = std::exp(node.log_r);
        s += node.weight * pk.g(xi);
      } else {
        s += node.weight * pk.radial_log_density(node.log_r);
      }
    }
    return vol * s;
  }
  check_eval_range(log_hi);
  const SphereRule sphere = pk.radial_g ? SphereRule{} : sphere_rule(d, quad.sphere_nodes);
  const auto nodes = radial_nodes(d, log_lo, log_hi, sym.radial_breakpoints(), quad);
  std::vector<double> xi(static_cast<std::size_t>(d), 0.0);
  Complex s{0.0, 0.0};
  if (pk.radial_g) {
    for (const RadialNode& node : nodes) {
      xi[0] = std::exp(node.log_r);
      s += radial_measure(d, node) * apply(what, pk.g(xi));
    }
    return sphere_volume(d) * s;
  }
  for (std::size_t k = 0; k < sphere.size(); ++k) {
    const auto dir = sphere.direction(k);
    Complex inner{0.0, 0.0};
    for (const RadialNode& node : nodes) {
      const double r = std::exp(node.log_r);
      for (int i = 0; i < d; ++i) xi[static_cast<std::size_t>(i)] = r * dir[static_cast<std::size_t>(i)];
      inner += radial_measure(d, node) * apply(what, pk.g(xi));
    }
    s += sphere.weights[k] * inner;
  }
  return s;
}

// Integral of rho(r)^power r^{d-1} over [e^{log_lo}, e^{log_hi}] where rho is
// the radial profile of a classical symbol with cutoff c.
double classical_radial_factor(int d, double c, int power, double log_lo, double log_hi, const QuadSpec& quad) {
  if (!(log_hi > log_lo)) return 0.0;
  const double log_c = std::log(c);
  double total = 0.0;
  // homogeneous range [max(lo, c), hi]
  const double a = std::max(log_lo, log_c);
  if (log_hi > a) {
    if (power == 1) {
      total += log_hi - a;
    } else {
      // int r^{-pd} r^{d-1} dr = (a^{-(p-1)d} - b^{-(p-1)d}) / ((p-1)d)
      const double k = (power - 1.0) * d;
      total += (std::exp(-k * a) - std::exp(-k * log_hi)) / k;
    }
  }
  // ramp range [max(lo, c/2), min(hi, c)]
  const double ra = std::max(std::isinf(log_lo) ? 0.0 : std::exp(log_lo), 0.5 * c);
  const double rb = std::min(std::exp(std::min(log_hi, log_c)), c);
  if (rb > ra) {
    const QuadratureRule rule = composite_gauss_legendre(ra, rb, quad.radial_nodes, 0.25 * c);
    const double scale = std::pow(c, -d);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double r = rule.nodes[i];
      const double rho = smoothstep((r - 0.5 * c) / (0.5 * c)) * scale;
      total += rule.weights[i] * std::pow(rho, power) * std::pow(r, d - 1);
    }
  }
  return total;
}

Complex classical_shell(const Symbol& sym, const ClassicalKind& ck, double log_lo, double log_hi,
                        ShellIntegrand what, const QuadSpec& quad) {
  const int d = sym.dim();
  const int power = what == ShellIntegrand::magnitude_squared ? 2 : 1;
  const double radial = classical_radial_factor(d, ck.cutoff_radius, power, log_lo, log_hi, quad);
  if (radial == 0.0) return {0.0, 0.0};
  const SphereRule sphere = sphere_rule(d, quad.sphere_nodes);
  const Complex angular = x_integral(
      sym,
      [&](std::span<const double> x) {
        Complex s{0.0, 0.0};
        for (std::size_t k = 0; k < sphere.size(); ++k)
          s += sphere.weights[k] * apply(what, ck.principal(x, sphere.direction(k)));
        return s;
      },
      quad);
  return angular * radial;
}

Complex general_shell(const Symbol& sym, double log_lo, double log_hi, ShellIntegrand what, const QuadSpec& quad) {
  check_eval_range(log_hi);
  const int d = sym.dim();
  const SphereRule sphere = sphere_rule(d, quad.sphere_nodes);
  const auto nodes = radial_nodes(d, log_lo, log_hi, sym.radial_breakpoints(), quad);
  std::vector<double> xi(static_cast<std::size_t>(d), 0.0);
  return x_integral(
      sym,
      [&](std::span<const double> x) {
        Complex s{0.0, 0.0};
        for (std::size_t k = 0; k < sphere.size(); ++k) {
          const auto dir = sphere.direction(k);
          Complex inner{0.0, 0.0};
          for (const RadialNode& node : nodes) {
            const double r = std::exp(node.log_r);
            for (int i = 0; i < d; ++i) xi[static_cast<std::size_t>(i)] = r * dir[static_cast<std::size_t>(i)];
            inner += radial_measure(d, node) * apply(what, sym(x, xi));
          }
          s += sphere.weights[k] * inner;
        }
        return s;
      },
      quad);
}

}  // namespace

Complex shell_integral(const Symbol& sym, double log_r_lo, double log_r_hi, ShellIntegrand what,
                       const QuadSpec& quad) {
  quad.validate();
  if (std::isnan(log_r_lo) || std::isnan(log_r_hi)) throw InvalidArgument("shell_integral: NaN radius");
  if (!(log_r_hi > log_r_lo)) return {0.0, 0.0};

  Complex result{0.0, 0.0};
  if (const auto* ck = sym.classical()) {
    result = classical_shell(sym, *ck, log_r_lo, log_r_hi, what, quad);
  } else if (const auto* pk = sym.product()) {
    const Complex fx = x_integral(sym, [&](std::span<const double> x) { return apply(what, pk->f(x)); }, quad);
    result = fx == Complex{0.0, 0.0} ? fx : fx * product_xi_integral(sym, *pk, log_r_lo, log_r_hi, what, quad);
  } else {
    result = general_shell(sym, log_r_lo, log_r_hi, what, quad);
  }
  require_finite(result, sym.label().c_str());
  return result;
}

Complex ball_integral(const Symbol& sym, double radius, const QuadSpec& quad) {
  if (!(radius >= 0.0)) throw InvalidArgument("ball_integral: radius must be non-negative");
  if (radius == 0.0) return {0.0, 0.0};
  return ball_integral_log_radius(sym, std::log(radius), quad);
}

Complex ball_integral_log_radius(const Symbol& sym, double log_radius, const QuadSpec& quad) {
  return shell_integral(sym, -std::numeric_limits<double>::infinity(), log_radius, ShellIntegrand::value, quad);
}

double log1p_from_log(double log_n) {
  if (log_n < 30.0) return std::log1p(std::exp(log_n));
  return log_n + std::log1p(std::exp(-log_n));
}

ResidueSeries residue_series_log(const Symbol& sym, std::span<const double> log_n_grid, const QuadSpec& quad) {
  ResidueSeries out;
  out.d = sym.dim();
  const double log2 = std::log(2.0);
  for (std::size_t i = 0; i < log_n_grid.size(); ++i) {
    const double ln = log_n_grid[i];
    if (!(ln >= log2 - 1e-12)) throw InvalidArgument("residue_series: grid points must satisfy n >= 2");
    if (i > 0 && !(ln > log_n_grid[i - 1])) throw InvalidArgument("residue_series: grid must be strictly increasing");
    const Complex v = ball_integral_log_radius(sym, ln / out.d, quad);
    out.log_n.push_back(ln);
    out.n.push_back(ln < 700.0 ? std::round(std::exp(ln)) : std::numeric_limits<double>::infinity());
    out.ball_integral.push_back(v);
    out.res.push_back(static_cast<double>(out.d) * v / log1p_from_log(ln));
  }
  return out;
}

ResidueSeries residue_series(const Symbol& sym, std::span<const double> n_grid, const QuadSpec& quad) {
  std::vector<double> logs;
  logs.reserve(n_grid.size());
  for (double n : n_grid) {
    if (!(n >= 2.0)) throw InvalidArgument("residue_series: grid points must satisfy n >= 2");
    logs.push_back(std::log(n));
  }
  ResidueSeries out = residue_series_log(sym, logs, quad);
  for (std::size_t i = 0; i < n_grid.size(); ++i) out.n[i] = n_grid[i];
  return out;
}

double doubly_exponential_log_n(double t) {
  const double e = std::exp(t);
  if (e < std::log(9007199254740992.0)) return std::log(std::ceil(std::exp(e)));
  return e;
}

std::vector<double> doubly_exponential_log_grid(std::span<const double> t_grid) {
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(doubly_exponential_log_n(t));
  return out;
}

Complex wodzicki_residue(const Symbol& sym, const QuadSpec& quad) {
  const auto* ck = sym.classical();
  if (!ck) throw InvalidArgument("residue undefined via Res_W for non-classical symbol '" + sym.label() +
                                 "'; use residue_series");
  const SphereRule sphere = sphere_rule(sym.dim(), quad.sphere_nodes);
  const Complex r = x_integral(
      sym,
      [&](std::span<const double> x) {
        Complex s{0.0, 0.0};
        for (std::size_t k = 0; k < sphere.size(); ++k) s += sphere.weights[k] * ck->principal(x, sphere.direction(k));
        return s;
      },
      quad);
  require_finite(r, "wodzicki_residue");
  return r;
}

ModulatedNormReport modulated_norm(const Symbol& sym, std::span<const double> t_grid, const QuadSpec& quad,
                                   double growth_slope_threshold) {
  constexpr double kHorizon = 60.0;
  ModulatedNormReport rep;
  const double inf = std::numeric_limits<double>::infinity();

  const double l2_sq = shell_integral(sym, -inf, kHorizon, ShellIntegrand::magnitude_squared, quad).real();
  const double l2_sq_far = shell_integral(sym, -inf, 2.0 * kHorizon, ShellIntegrand::magnitude_squared, quad).real();
  rep.l2_norm = std::sqrt(l2_sq);
  if (std::abs(l2_sq_far - l2_sq) > 1e-6 * std::max(l2_sq_far, 1e-300)) {
    rep.modulated = false;
    rep.diagnostic = "not a modulated symbol: L2 tail of '" + sym.label() + "' does not converge";
  }

  std::vector<double> log_t;
  double sup = 0.0;
  for (double t : t_grid) {
    if (!(t >= 1.0)) throw InvalidArgument("modulated_norm: t-grid must lie in [1, inf)");
    const double tail = shell_integral(sym, std::log(t), kHorizon, ShellIntegrand::magnitude_squared, quad).real();
    const double term = std::pow(t, 0.5 * sym.dim()) * std::sqrt(std::max(tail, 0.0));
    rep.t.push_back(t);
    rep.tail_terms.push_back(term);
    log_t.push_back(std::log(t));
    sup = std::max(sup, term);
  }
  rep.tail_trend = trend_against(std::span<const double>(log_t), std::span<const double>(rep.tail_terms));
  if (rep.modulated && sup > 0.0 && rep.tail_trend.slope_re / sup > growth_slope_threshold) {
    rep.modulated = false;
    rep.diagnostic = "not a modulated symbol: tail terms grow with t";
  }
  rep.value = rep.l2_norm + sup;
  return rep;
}

}  // namespace pdolab
