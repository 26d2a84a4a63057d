#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pdolab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with n nodes on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre over [a, b] split at every breakpoint in
/// (a, b) and into panels no wider than max_panel.
QuadratureRule composite_gauss_legendre(double a, double b, int nodes_per_panel,
                                        double max_panel,
                                        std::span<const double> breakpoints = {});

/// Tensor-product rule over an axis-aligned box; nodes are stored
/// point-major (d coordinates per point).
struct TensorRule {
  int dim = 0;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

TensorRule tensor_gauss_legendre(std::span<const double> lo, std::span<const double> hi,
                                 int nodes_per_axis);

/// Quadrature on the unit sphere S^{d-1}. For d = 1 this is the two-point
/// set {-1, 1} with counting measure; d = 2 uses the trapezoid rule on the
/// circle; d = 3 uses Gauss-Legendre in cos(theta) times trapezoid in phi.
struct SphereRule {
  int dim = 0;
  std::vector<double> directions;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> direction(std::size_t i) const {
    return {directions.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

SphereRule sphere_rule(int d, int resolution);

/// Surface measure of S^{d-1} (2 for d = 1, the counting measure of {-1, 1}).
double sphere_volume(int d);

/// Resolution knobs for symbol-level integrals.
struct QuadSpec {
  int x_nodes = 0;              ///< Gauss-Legendre nodes per x-axis; 0 picks the default for d
  int sphere_nodes = 64;        ///< trapezoid nodes on S^1 (d = 2) or azimuthal nodes (d = 3)
  int radial_nodes = 16;        ///< Gauss-Legendre nodes per radial panel
  double log_panel_width = 0.5; ///< radial panel width in log|xi|

  int x_nodes_for(int d) const;
  void validate() const;
};

/// Quintic smoothstep on [0, 1]: 0 below, 1 above, C^2 joins.
double smoothstep(double t);

}  // namespace pdolab
