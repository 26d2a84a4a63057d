#include "pdolab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <numbers>
#include <utility>

#include "pdolab/errors.hpp"
#include "pdolab/quadrature.hpp"

namespace pdolab {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double bump_profile(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

double profile_moment(int power) {
  const QuadratureRule rule = composite_gauss_legendre(-1.0, 1.0, 20, 1.0 / 16.0);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(bump_profile(rule.nodes[i]), power);
  return s;
}

void check_dim(int d) {
  if (d < 1) throw InvalidArgument("symbol dimension must be positive, got " + std::to_string(d));
}

}  // namespace

Box Box::cube(int d, double half_width, double center) {
  check_dim(d);
  return Box{std::vector<double>(static_cast<std::size_t>(d), center - half_width),
             std::vector<double>(static_cast<std::size_t>(d), center + half_width)};
}

bool Box::empty() const {
  if (lo.empty() || lo.size() != hi.size()) return true;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(hi[i] > lo[i])) return true;
  return false;
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

Box Box::torus(int d) { return cube(d, std::numbers::pi); }

bool Box::is_torus_cell() const {
  if (lo.empty()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] != -std::numbers::pi || hi[i] != std::numbers::pi) return false;
  return true;
}

double Box::margin_inside_torus() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lo.size(); ++i) {
    m = std::min(m, lo[i] + std::numbers::pi);
    m = std::min(m, std::numbers::pi - hi[i]);
  }
  return m;
}

Symbol::Symbol(int d, Box x_support, SymbolFn eval, SymbolKind kind,
               std::vector<double> radial_breakpoints, std::string label)
    : d_(d),
      support_(std::move(x_support)),
      eval_(std::move(eval)),
      kind_(std::move(kind)),
      breaks_(std::move(radial_breakpoints)),
      label_(std::move(label)) {
  check_dim(d_);
  if (support_.dim() != d_ || support_.empty())
    throw InvalidArgument("symbol x_support must be a non-empty box of dimension " + std::to_string(d_));
  if (!eval_) throw InvalidArgument("symbol evaluation function is empty");
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
}

Complex Symbol::operator()(std::span<const double> x, std::span<const double> xi) const {
  if (!support_.contains(x)) return {0.0, 0.0};
  return eval_(x, xi);
}

Symbol Symbol::scaled(Complex factor) const {
  SymbolFn eval = [inner = eval_, factor](std::span<const double> x, std::span<const double> xi) {
    return factor * inner(x, xi);
  };
  SymbolKind kind = kind_;
  if (auto* c = std::get_if<ClassicalKind>(&kind)) {
    c->principal = [p = c->principal, factor](std::span<const double> x, std::span<const double> s) {
      return factor * p(x, s);
    };
  } else if (auto* p = std::get_if<ProductKind>(&kind)) {
    p->f = [f = p->f, factor](std::span<const double> x) { return factor * f(x); };
  }
  return Symbol(d_, support_, std::move(eval), std::move(kind), breaks_, label_);
}

Symbol Symbol::with_label(std::string label) const {
  Symbol s = *this;
  s.label_ = std::move(label);
  return s;
}

Symbol operator+(const Symbol& a, const Symbol& b) {
  if (a.d_ != b.d_) throw InvalidArgument("cannot add symbols of different dimension");
  Box box = a.support_;
  for (std::size_t i = 0; i < box.lo.size(); ++i) {
    box.lo[i] = std::min(box.lo[i], b.support_.lo[i]);
    box.hi[i] = std::max(box.hi[i], b.support_.hi[i]);
  }
  SymbolFn eval = [a, b](std::span<const double> x, std::span<const double> xi) { return a(x, xi) + b(x, xi); };
  std::vector<double> breaks(a.breaks_);
  breaks.insert(breaks.end(), b.breaks_.begin(), b.breaks_.end());

  SymbolKind kind = GeneralKind{};
  const auto* ca = a.classical();
  const auto* cb = b.classical();
  if (ca && cb && ca->cutoff_radius == cb->cutoff_radius) {
    const Box sa = a.support_;
    const Box sb = b.support_;
    kind = ClassicalKind{
        [pa = ca->principal, pb = cb->principal, sa, sb](std::span<const double> x, std::span<const double> s) {
          Complex v{0.0, 0.0};
          if (sa.contains(x)) v += pa(x, s);
          if (sb.contains(x)) v += pb(x, s);
          return v;
        },
        ca->cutoff_radius};
  }
  return Symbol(a.d_, std::move(box), std::move(eval), std::move(kind), std::move(breaks),
                a.label_ + "+" + b.label_);
}

Symbol make_classical_symbol(int d, PrincipalFn principal, double cutoff_radius, Box x_support) {
  check_dim(d);
  if (!(cutoff_radius >= 1.0)) throw InvalidArgument("classical symbol: cutoff_radius must be >= 1");
  if (!principal) throw InvalidArgument("classical symbol: principal part is empty");
  if (x_support.dim() != d || x_support.empty()) throw InvalidArgument("classical symbol: empty x_support");

  const double c = cutoff_radius;
  const double inner_scale = std::pow(c, -d);
  SymbolFn eval = [principal, c, inner_scale, d](std::span<const double> x, std::span<const double> xi) {
    const double r = norm(xi);
    double s[3] = {0.0, 0.0, 0.0};
    if (r >= c) {
      for (int i = 0; i < d; ++i) s[i] = xi[static_cast<std::size_t>(i)] / r;
      return principal(x, std::span<const double>(s, static_cast<std::size_t>(d))) * std::pow(r, -d);
    }
    const double ramp = smoothstep((r - 0.5 * c) / (0.5 * c));
    if (ramp == 0.0) return Complex{0.0, 0.0};
    for (int i = 0; i < d; ++i) s[i] = xi[static_cast<std::size_t>(i)] / r;
    return principal(x, std::span<const double>(s, static_cast<std::size_t>(d))) * (ramp * inner_scale);
  };
  if (d > 3) throw InvalidArgument("classical symbol: d > 3 is not supported");
  return Symbol(d, std::move(x_support), std::move(eval), ClassicalKind{std::move(principal), c},
                {0.5 * c, c}, "classical");
}

Symbol make_product_symbol(PointFn f, PointFn g, int d, Box x_support, bool radial_g,
                           std::vector<double> radial_breakpoints) {
  check_dim(d);
  if (!f || !g) throw InvalidArgument("product symbol: f and g must be set");
  if (x_support.dim() != d || x_support.empty()) throw InvalidArgument("product symbol: empty x_support");
  SymbolFn eval = [f, g](std::span<const double> x, std::span<const double> xi) { return f(x) * g(xi); };
  ProductKind kind{std::move(f), std::move(g), radial_g, {}};
  return Symbol(d, std::move(x_support), std::move(eval), std::move(kind), std::move(radial_breakpoints),
                "product");
}

double nonmeasurable_cutoff(double r) { return smoothstep(r - 3.0); }

Symbol make_nonmeasurable_symbol(int d, std::optional<double> phi_norm_target) {
  check_dim(d);
  if (d > 3) throw InvalidArgument("non-measurable symbol: d > 3 is not supported");
  const double target = phi_norm_target.value_or(1.0 / sphere_volume(d));
  if (!(target > 0.0)) throw InvalidArgument("non-measurable symbol: phi norm target must be positive");

  // amplitude^2 * (int psi^2)^d = target
  const double amp = std::sqrt(target / std::pow(bump_profile_square_integral(), d));
  const Bump phi{std::vector<double>(static_cast<std::size_t>(d), 0.0), 1.0, amp};

  PointFn f = [phi](std::span<const double> x) {
    const double v = phi(x);
    return Complex{v * v, 0.0};
  };
  PointFn g = [d](std::span<const double> xi) {
    const double r = norm(xi);
    if (r <= 3.0) return Complex{0.0, 0.0};
    const double ll = std::log(std::log(r));
    return Complex{nonmeasurable_cutoff(r) * (std::sin(ll) + std::cos(ll)) * std::pow(r, -d), 0.0};
  };
  ProductKind kind{std::move(f), std::move(g), true, [](double u) {
                     if (u <= std::log(3.0)) return 0.0;
                     const double cut = u >= std::log(4.0) ? 1.0 : nonmeasurable_cutoff(std::exp(u));
                     const double lu = std::log(u);
                     return cut * (std::sin(lu) + std::cos(lu));
                   }};
  const auto& pk = kind;
  SymbolFn eval = [f = pk.f, g = pk.g](std::span<const double> x, std::span<const double> xi) {
    return f(x) * g(xi);
  };
  return Symbol(d, phi.support(), std::move(eval), std::move(kind), {3.0, 4.0}, "nonmeasurable");
}

Symbol make_zero_symbol(int d) {
  check_dim(d);
  PrincipalFn zero = [](std::span<const double>, std::span<const double>) { return Complex{0.0, 0.0}; };
  return make_classical_symbol(d, zero, 1.0, Box::cube(d, 1.0)).with_label("zero");
}

double japanese_bracket_power(std::span<const double> xi, double s) {
  double r2 = 0.0;
  for (double c : xi) r2 += c * c;
  return std::pow(1.0 + r2, -0.5 * s);
}

double Bump::operator()(std::span<const double> x) const {
  double v = amplitude;
  for (std::size_t i = 0; i < center.size(); ++i) {
    v *= bump_profile((x[i] - center[i]) / half_width);
    if (v == 0.0) return 0.0;
  }
  return v;
}

double Bump::integral() const { return amplitude * std::pow(half_width * bump_profile_integral(), dim()); }

double Bump::l2_norm_squared() const {
  return amplitude * amplitude * std::pow(half_width * bump_profile_square_integral(), dim());
}

Box Bump::support() const {
  Box b;
  for (double c : center) {
    b.lo.push_back(c - half_width);
    b.hi.push_back(c + half_width);
  }
  return b;
}

Bump Bump::with_integral(std::vector<double> center, double half_width, double integral) {
  if (center.empty()) throw InvalidArgument("bump: empty center");
  if (!(half_width > 0.0)) throw InvalidArgument("bump: half_width must be positive");
  Bump b{std::move(center), half_width, 1.0};
  b.amplitude = integral / b.integral();
  return b;
}

double bump_profile_integral() {
  static const double value = profile_moment(1);
  return value;
}

double bump_profile_square_integral() {
  static const double value = profile_moment(2);
  return value;
}

}  // namespace pdolab
