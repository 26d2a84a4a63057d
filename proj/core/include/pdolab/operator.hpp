#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pdolab/basis.hpp"
#include "pdolab/symbol.hpp"

namespace pdolab {

using Matrix = Eigen::MatrixXcd;

/// Dense realization of an operator on a truncated torus Fourier basis.
/// Immutable after assembly.
struct OperatorMatrix {
  FrequencyBasis basis;
  Matrix entries;
  std::string label;

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Options shared by the x-quadrature based assemblers.
struct AssemblyOptions {
  int x_quad_nodes = 0;  ///< uniform nodes per axis; raised to at least max(8K, 128) (64 for d = 3)
  int threads = 1;       ///< column-parallel workers
};

/// Minimum distance between a symbol's x-support and the torus boundary.
inline constexpr double kTorusEdgeMargin = 0.1;

/// entries[a][b] = (2pi)^{-d} int_{(-pi,pi)^d} e^{i<x, m_b - m_a>} p(x, m_b) dx,
/// evaluated by the periodic trapezoid rule (an FFT per column). Rejects
/// symbols whose support comes within kTorusEdgeMargin of the torus boundary,
/// unless the support is the whole cell (Box::torus), i.e. p is periodic in x.
OperatorMatrix assemble_operator(const Symbol& sym, const FrequencyBasis& basis, AssemblyOptions opts = {});

/// diag((1 + |m|^2)^{-s/2}); s = d gives (1 - Laplacian)^{-d/2} on the flat torus.
OperatorMatrix laplacian_multiplier(const FrequencyBasis& basis, double s);

/// M_f in the Fourier basis: entries[a][b] = f^(m_a - m_b). f is a function on
/// the torus (supported inside (-pi, pi)^d or smooth and periodic).
OperatorMatrix multiplication_operator(const PointFn& f, const FrequencyBasis& basis, AssemblyOptions opts = {});

/// Torus Fourier coefficients f^(k) = (2pi)^{-d} int f(x) e^{-i<k,x>} dx for
/// |k|_inf <= kmax, by the periodic trapezoid rule on nodes_per_axis points.
/// Row-major over k in [-kmax, kmax]^d.
std::vector<Complex> torus_fourier_coefficients(const PointFn& f, int d, int kmax, int nodes_per_axis);

/// Diagonal of M_f (1 - Laplacian)^{-s/2} without assembling it:
/// f^(0) (1 + |m_j|^2)^{-s/2}.
std::vector<Complex> multiplier_product_diagonal(const PointFn& f, const FrequencyBasis& basis, double s,
                                                 int nodes_per_axis = 256);

struct DiagonalSums {
  int d = 1;
  std::vector<std::size_t> n;
  std::vector<Complex> partial_sum;  ///< sum_{j<=n} (T e_j, e_j)
  std::vector<Complex> residue;      ///< d (2pi)^d partial_sum / log(1+n)
};

DiagonalSums torus_diagonal_sums(const OperatorMatrix& T, std::span<const std::size_t> n_grid);
DiagonalSums torus_diagonal_sums(std::span<const Complex> diagonal, int d, std::span<const std::size_t> n_grid);

}  // namespace pdolab
