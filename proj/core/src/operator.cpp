#include "pdolab/operator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "parallel.hpp"
#include "pdolab/errors.hpp"

namespace pdolab {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer make_buffer(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer(p);
}

// Forward d-dimensional DFT of size M^d. The plan is created once and then
// executed on per-thread buffers through the new-array interface.
class PeriodicGrid {
 public:
  PeriodicGrid(int d, int m) : d_(d), m_(m) {
    total_ = 1;
    for (int i = 0; i < d; ++i) total_ *= static_cast<std::size_t>(m);
    auto in = make_buffer(total_);
    auto out = make_buffer(total_);
    std::vector<int> dims(static_cast<std::size_t>(d), m);
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft(d, dims.data(), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    if (!plan_) throw NumericalError("FFTW could not create a plan");
  }
  ~PeriodicGrid() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  PeriodicGrid(const PeriodicGrid&) = delete;
  PeriodicGrid& operator=(const PeriodicGrid&) = delete;

  std::size_t total() const { return total_; }
  int nodes() const { return m_; }
  int dim() const { return d_; }

  double coordinate(std::size_t j) const {
    return -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / m_;
  }
  void point(std::size_t flat, std::span<double> x) const {
    for (int i = d_ - 1; i >= 0; --i) {
      x[static_cast<std::size_t>(i)] = coordinate(flat % static_cast<std::size_t>(m_));
      flat /= static_cast<std::size_t>(m_);
    }
  }
  void execute(fftw_complex* in, fftw_complex* out) const { fftw_execute_dft(plan_, in, out); }

  // (2pi)^{-d} int f e^{-i<k,x>} from the DFT output; nodes start at -pi.
  Complex coefficient(const fftw_complex* dft, std::span<const int> k) const {
    std::size_t idx = 0;
    int parity = 0;
    for (int i = 0; i < d_; ++i) {
      const int ki = k[static_cast<std::size_t>(i)];
      idx = idx * static_cast<std::size_t>(m_) + static_cast<std::size_t>(((ki % m_) + m_) % m_);
      parity += ki;
    }
    const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    return Complex{dft[idx][0], dft[idx][1]} * (sign / static_cast<double>(total_));
  }

 private:
  int d_;
  int m_;
  std::size_t total_;
  fftw_plan plan_ = nullptr;
};

// small K still needs enough nodes to resolve the x-profile of the symbol
int grid_nodes(int d, int K, int requested) { return std::max({requested, 8 * K, d == 3 ? 64 : 128}); }

void check_finite(const Matrix& m, const std::string& label) {
  if (!m.allFinite()) throw NumericalError("non-finite entries while assembling " + label);
}

// Fills column-independent Toeplitz part f^(m_a - m_b) times a column factor.
Matrix toeplitz_with_column_factor(const PeriodicGrid& grid, const fftw_complex* dft, const FrequencyBasis& basis,
                                   const std::vector<Complex>& column_factor) {
  const std::size_t n = basis.size();
  const int d = basis.dim();
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<int> k(static_cast<std::size_t>(d));
  for (std::size_t b = 0; b < n; ++b) {
    const auto mb = basis.freq(b);
    for (std::size_t a = 0; a < n; ++a) {
      const auto ma = basis.freq(a);
      for (int i = 0; i < d; ++i) k[static_cast<std::size_t>(i)] = ma[static_cast<std::size_t>(i)] - mb[static_cast<std::size_t>(i)];
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = grid.coefficient(dft, k) * column_factor[b];
    }
  }
  return out;
}

FftwBuffer transform_samples(const PeriodicGrid& grid, const std::function<Complex(std::span<const double>)>& f) {
  auto in = make_buffer(grid.total());
  auto out = make_buffer(grid.total());
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  for (std::size_t j = 0; j < grid.total(); ++j) {
    grid.point(j, x);
    const Complex v = f(x);
    in[j][0] = v.real();
    in[j][1] = v.imag();
  }
  grid.execute(in.get(), out.get());
  return out;
}

}  // namespace

OperatorMatrix assemble_operator(const Symbol& sym, const FrequencyBasis& basis, AssemblyOptions opts) {
  const int d = basis.dim();
  if (sym.dim() != d) throw InvalidArgument("assemble_operator: symbol and basis dimensions differ");
  const double margin = sym.x_support().margin_inside_torus();
  if (margin < kTorusEdgeMargin && !sym.x_support().is_torus_cell())
    throw InvalidArgument("assemble_operator: x-support of '" + sym.label() + "' comes within " +
                          std::to_string(margin) + " of the torus boundary (need " +
                          std::to_string(kTorusEdgeMargin) + "); periodization would corrupt eigenvalues");

  const PeriodicGrid grid(d, grid_nodes(basis.dim(), basis.cutoff(), opts.x_quad_nodes));
  const std::size_t n = basis.size();
  const Box& box = sym.x_support();

  OperatorMatrix out{basis, Matrix(), sym.label()};
  if (const auto* pk = sym.product()) {
    auto dft = transform_samples(grid, [&](std::span<const double> x) {
      return box.contains(x) ? pk->f(x) : Complex{0.0, 0.0};
    });
    std::vector<Complex> g(n);
    std::vector<double> xi(static_cast<std::size_t>(d));
    for (std::size_t b = 0; b < n; ++b) {
      const auto mb = basis.freq(b);
      for (int i = 0; i < d; ++i) xi[static_cast<std::size_t>(i)] = mb[static_cast<std::size_t>(i)];
      g[b] = pk->g(xi);
    }
    out.entries = toeplitz_with_column_factor(grid, dft.get(), basis, g);
    check_finite(out.entries, out.label);
    return out;
  }

  // Grid nodes inside the support; everything else contributes zero.
  std::vector<std::size_t> inside;
  {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t j = 0; j < grid.total(); ++j) {
      grid.point(j, x);
      if (box.contains(x)) inside.push_back(j);
    }
  }

  out.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  detail::parallel_chunks(n, opts.threads, [&](std::size_t begin, std::size_t end, int) {
    auto in = make_buffer(grid.total());
    auto dft = make_buffer(grid.total());
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> xi(static_cast<std::size_t>(d));
    std::vector<int> k(static_cast<std::size_t>(d));
    for (std::size_t b = begin; b < end; ++b) {
      std::fill_n(&in[0][0], 2 * grid.total(), 0.0);
      const auto mb = basis.freq(b);
      for (int i = 0; i < d; ++i) xi[static_cast<std::size_t>(i)] = mb[static_cast<std::size_t>(i)];
      for (std::size_t j : inside) {
        grid.point(j, x);
        const Complex v = sym(x, xi);
        in[j][0] = v.real();
        in[j][1] = v.imag();
      }
      grid.execute(in.get(), dft.get());
      for (std::size_t a = 0; a < n; ++a) {
        const auto ma = basis.freq(a);
        for (int i = 0; i < d; ++i)
          k[static_cast<std::size_t>(i)] = ma[static_cast<std::size_t>(i)] - mb[static_cast<std::size_t>(i)];
        out.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = grid.coefficient(dft.get(), k);
      }
    }
  });
  check_finite(out.entries, out.label);
  return out;
}

OperatorMatrix laplacian_multiplier(const FrequencyBasis& basis, double s) {
  const std::size_t n = basis.size();
  OperatorMatrix out{basis, Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                     "laplacian_multiplier(s=" + std::to_string(s) + ")"};
  for (std::size_t j = 0; j < n; ++j)
    out.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) =
        std::pow(1.0 + static_cast<double>(basis.norm_squared(j)), -0.5 * s);
  return out;
}

OperatorMatrix multiplication_operator(const PointFn& f, const FrequencyBasis& basis, AssemblyOptions opts) {
  if (!f) throw InvalidArgument("multiplication_operator: empty function");
  const PeriodicGrid grid(basis.dim(), grid_nodes(basis.dim(), basis.cutoff(), opts.x_quad_nodes));
  auto dft = transform_samples(grid, f);
  OperatorMatrix out{basis, toeplitz_with_column_factor(grid, dft.get(), basis, std::vector<Complex>(basis.size(), 1.0)),
                     "multiplication_operator"};
  check_finite(out.entries, out.label);
  return out;
}

std::vector<Complex> torus_fourier_coefficients(const PointFn& f, int d, int kmax, int nodes_per_axis) {
  if (d < 1 || d > 3) throw InvalidArgument("torus_fourier_coefficients: d must be 1, 2 or 3");
  if (kmax < 0 || nodes_per_axis < 2 * kmax + 1)
    throw InvalidArgument("torus_fourier_coefficients: need at least 2*kmax+1 nodes per axis");
  const PeriodicGrid grid(d, nodes_per_axis);
  auto dft = transform_samples(grid, f);
  const int side = 2 * kmax + 1;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(side);
  std::vector<Complex> out(total);
  std::vector<int> k(static_cast<std::size_t>(d));
  for (std::size_t j = 0; j < total; ++j) {
    std::size_t rest = j;
    for (int i = d - 1; i >= 0; --i) {
      k[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(side)) - kmax;
      rest /= static_cast<std::size_t>(side);
    }
    out[j] = grid.coefficient(dft.get(), k);
  }
  return out;
}

std::vector<Complex> multiplier_product_diagonal(const PointFn& f, const FrequencyBasis& basis, double s,
                                                 int nodes_per_axis) {
  const Complex f0 = torus_fourier_coefficients(f, basis.dim(), 0, nodes_per_axis)[0];
  std::vector<Complex> diag(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    diag[j] = f0 * std::pow(1.0 + static_cast<double>(basis.norm_squared(j)), -0.5 * s);
  return diag;
}

DiagonalSums torus_diagonal_sums(std::span<const Complex> diagonal, int d, std::span<const std::size_t> n_grid) {
  DiagonalSums out;
  out.d = d;
  const double scale = d * std::pow(2.0 * std::numbers::pi, d);
  Complex running{0.0, 0.0};
  std::size_t done = 0;
  for (std::size_t n : n_grid) {
    if (n < 1 || n > diagonal.size())
      throw InvalidArgument("torus_diagonal_sums: n=" + std::to_string(n) + " outside [1, " +
                            std::to_string(diagonal.size()) + "]");
    if (n < done) throw InvalidArgument("torus_diagonal_sums: n_grid must be non-decreasing");
    for (; done < n; ++done) running += diagonal[done];
    out.n.push_back(n);
    out.partial_sum.push_back(running);
    out.residue.push_back(scale * running / std::log1p(static_cast<double>(n)));
  }
  return out;
}

DiagonalSums torus_diagonal_sums(const OperatorMatrix& T, std::span<const std::size_t> n_grid) {
  const Eigen::VectorXcd diag = T.entries.diagonal();
  return torus_diagonal_sums(std::span<const Complex>(diag.data(), static_cast<std::size_t>(diag.size())),
                             T.basis.dim(), n_grid);
}

}  // namespace pdolab
