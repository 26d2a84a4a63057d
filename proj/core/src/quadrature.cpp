#include "pdolab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pdolab/errors.hpp"

namespace pdolab {

namespace {

// Legendre P_n and its derivative at x by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    rule.nodes[0] = 0.5 * (a + b);
    rule.weights[0] = b - a;
    return rule;
  }
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * x;
    rule.nodes[hi] = mid + half * x;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(double a, double b, int nodes_per_panel,
                                        double max_panel,
                                        std::span<const double> breakpoints) {
  if (!(b >= a)) throw InvalidArgument("composite_gauss_legendre: b < a");
  if (!(max_panel > 0.0)) throw InvalidArgument("composite_gauss_legendre: panel width must be positive");
  QuadratureRule out;
  if (b == a) return out;

  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  const QuadratureRule ref = gauss_legendre(nodes_per_panel);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    if (hi <= lo) continue;
    const auto panels = static_cast<int>(std::ceil((hi - lo) / max_panel));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double pa = lo + p * h;
      for (std::size_t k = 0; k < ref.size(); ++k) {
        out.nodes.push_back(pa + 0.5 * h * (ref.nodes[k] + 1.0));
        out.weights.push_back(0.5 * h * ref.weights[k]);
      }
    }
  }
  return out;
}

TensorRule tensor_gauss_legendre(std::span<const double> lo, std::span<const double> hi,
                                 int nodes_per_axis) {
  if (lo.size() != hi.size() || lo.empty())
    throw InvalidArgument("tensor_gauss_legendre: box bounds mismatch");
  const int d = static_cast<int>(lo.size());
  std::vector<QuadratureRule> axes;
  axes.reserve(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) axes.push_back(gauss_legendre(nodes_per_axis, lo[i], hi[i]));

  TensorRule rule;
  rule.dim = d;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  rule.points.resize(total * lo.size());
  rule.weights.resize(total);
  std::vector<std::size_t> idx(lo.size(), 0);
  for (std::size_t p = 0; p < total; ++p) {
    double w = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      rule.points[p * lo.size() + i] = axes[i].nodes[idx[i]];
      w *= axes[i].weights[idx[i]];
    }
    rule.weights[p] = w;
    for (std::size_t i = lo.size(); i-- > 0;) {
      if (++idx[i] < axes[i].size()) break;
      idx[i] = 0;
    }
  }
  return rule;
}

SphereRule sphere_rule(int d, int resolution) {
  if (resolution < 1) throw InvalidArgument("sphere_rule: resolution must be positive");
  SphereRule rule;
  rule.dim = d;
  switch (d) {
    case 1:
      rule.directions = {-1.0, 1.0};
      rule.weights = {1.0, 1.0};
      break;
    case 2: {
      const double h = 2.0 * std::numbers::pi / resolution;
      for (int k = 0; k < resolution; ++k) {
        rule.directions.push_back(std::cos(k * h));
        rule.directions.push_back(std::sin(k * h));
        rule.weights.push_back(h);
      }
      break;
    }
    case 3: {
      const QuadratureRule polar = gauss_legendre(std::max(2, resolution / 2));
      const double h = 2.0 * std::numbers::pi / resolution;
      for (std::size_t i = 0; i < polar.size(); ++i) {
        const double c = polar.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int k = 0; k < resolution; ++k) {
          rule.directions.push_back(s * std::cos(k * h));
          rule.directions.push_back(s * std::sin(k * h));
          rule.directions.push_back(c);
          rule.weights.push_back(polar.weights[i] * h);
        }
      }
      break;
    }
    default:
      throw InvalidArgument("sphere_rule: only d in {1, 2, 3} is supported");
  }
  return rule;
}

double sphere_volume(int d) {
  if (d < 1) throw InvalidArgument("sphere_volume: d must be positive");
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
  }
}

int QuadSpec::x_nodes_for(int d) const {
  if (x_nodes > 0) return x_nodes;
  switch (d) {
    case 1: return 96;
    case 2: return 64;
    default: return 32;
  }
}

void QuadSpec::validate() const {
  if (x_nodes < 0 || sphere_nodes < 1 || radial_nodes < 1 || !(log_panel_width > 0.0))
    throw InvalidArgument("QuadSpec: resolutions must be positive");
}

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

}  // namespace pdolab
