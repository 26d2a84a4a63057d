#include "pdolab/spectral.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pdolab/errors.hpp"
#include "pdolab/residue.hpp"

extern "C" void openblas_set_num_threads(int);

namespace pdolab {

namespace {

bool ordered_before(const Complex& a, const Complex& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

void require_square(const Matrix& T, const std::string& label) {
  if (T.rows() != T.cols()) throw InvalidArgument(label + ": matrix is not square");
  if (!T.allFinite()) throw InvalidArgument(label + ": matrix has non-finite entries");
}

}  // namespace

void sort_eigenvalues(std::vector<Complex>& values) {
  std::stable_sort(values.begin(), values.end(), ordered_before);
}

void pin_dense_solver_threads(int threads) { openblas_set_num_threads(std::max(threads, 1)); }

EigenSequence eigenvalue_sequence(const Matrix& T, const std::string& label) {
  require_square(T, label);
  const auto n = static_cast<lapack_int>(T.rows());
  EigenSequence seq;
  if (n == 0) return seq;
  Matrix work = T;  // zgeev overwrites its input
  std::vector<Complex> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(), nullptr, 1,
                                        nullptr, 1);
  if (info != 0)
    throw NumericalError("eigensolver failed to converge for '" + label + "' (zgeev info=" + std::to_string(info) + ")");
  seq.values = std::move(w);
  sort_eigenvalues(seq.values);
  return seq;
}

EigenSequence eigenvalue_sequence(const OperatorMatrix& T) { return eigenvalue_sequence(T.entries, T.label); }

EigenSequence singular_values(const Matrix& T, const std::string& label) {
  if (!T.allFinite()) throw InvalidArgument(label + ": matrix has non-finite entries");
  const auto m = static_cast<lapack_int>(T.rows());
  const auto n = static_cast<lapack_int>(T.cols());
  EigenSequence seq;
  seq.kind = SequenceKind::singular;
  if (m == 0 || n == 0) return seq;
  Matrix work = T;
  std::vector<double> s(static_cast<std::size_t>(std::min(m, n)));
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
    throw NumericalError("SVD failed to converge for '" + label + "' (zgesdd info=" + std::to_string(info) + ")");
  std::sort(s.begin(), s.end(), std::greater<>());
  seq.values.assign(s.begin(), s.end());
  return seq;
}

EigenSequence singular_values(const OperatorMatrix& T) { return singular_values(T.entries, T.label); }

HermitianEigen hermitian_eigen(const Matrix& S, const std::string& label) {
  require_square(S, label);
  const auto n = static_cast<lapack_int>(S.rows());
  HermitianEigen out;
  out.vectors = S;
  out.values.resize(static_cast<std::size_t>(n));
  if (n == 0) return out;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.vectors.data(), n, out.values.data());
  if (info != 0)
    throw NumericalError("Hermitian eigensolver failed for '" + label + "' (zheevd info=" + std::to_string(info) + ")");

  std::vector<std::size_t> order(out.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ordered_before(Complex{out.values[a], 0.0}, Complex{out.values[b], 0.0});
  });
  HermitianEigen sorted;
  sorted.vectors.resize(n, n);
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.values.push_back(out.values[order[i]]);
    sorted.vectors.col(static_cast<Eigen::Index>(i)) = out.vectors.col(static_cast<Eigen::Index>(order[i]));
  }
  return sorted;
}

double weak_lp_seminorm(const EigenSequence& seq, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("weak_lp_seminorm: p must be >= 1");
  if (seq.values.empty()) throw InvalidArgument("weak_lp_seminorm: empty sequence");
  std::vector<double> a(seq.values.size());
  std::transform(seq.values.begin(), seq.values.end(), a.begin(), [](Complex v) { return std::abs(v); });
  std::sort(a.begin(), a.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::pow(static_cast<double>(i + 1), 1.0 / p) * a[i]);
  return best;
}

DeviationSeries eigensum_vs_symbol(const EigenSequence& eigen, std::size_t matrix_size, const Symbol& sym,
                                   std::span<const std::size_t> n_grid, const QuadSpec& quad) {
  DeviationSeries out;
  const int d = sym.dim();
  const double norm = std::pow(2.0 * std::numbers::pi, -d);
  Complex running{0.0, 0.0};
  std::size_t done = 0;
  std::vector<double> log_n;
  for (std::size_t n : n_grid) {
    if (n < 1 || 2 * n > matrix_size)
      throw InvalidArgument("eigensum_vs_symbol: n=" + std::to_string(n) + " violates the truncation guard n <= N/2 (N=" +
                            std::to_string(matrix_size) + ")");
    if (n < done) throw InvalidArgument("eigensum_vs_symbol: n_grid must be non-decreasing");
    for (; done < n; ++done) running += eigen.at(done);
    const Complex v = norm * ball_integral_log_radius(sym, std::log(static_cast<double>(n)) / d, quad);
    out.n.push_back(n);
    out.eigen_sum.push_back(running);
    out.symbol_term.push_back(v);
    out.deviation.push_back(running - v);
    log_n.push_back(std::log(static_cast<double>(n)));
  }
  out.trend = trend_against(std::span<const double>(log_n), std::span<const Complex>(out.deviation));
  return out;
}

DeviationSeries eigensum_vs_symbol(const OperatorMatrix& T, const Symbol& sym, std::span<const std::size_t> n_grid,
                                   const QuadSpec& quad) {
  if (T.basis.dim() != sym.dim()) throw InvalidArgument("eigensum_vs_symbol: dimension mismatch");
  return eigensum_vs_symbol(eigenvalue_sequence(T), T.size(), sym, n_grid, quad);
}

CommutatorReport commutator_difference_diagnostic(const EigenSequence& a, const EigenSequence& b,
                                                  CommutatorDiagnosticOptions opts) {
  CommutatorReport rep;
  const std::size_t len = std::max(a.size(), b.size());
  rep.delta.reserve(len);
  Complex running{0.0, 0.0};
  std::vector<double> x;
  std::vector<Complex> y;
  for (std::size_t j = 0; j < len; ++j) {
    running += a.at(j) - b.at(j);
    rep.delta.push_back(running);
    if (j + 1 >= opts.fit_from) {
      x.push_back(std::log(static_cast<double>(j + 1)));
      y.push_back(running);
    }
  }
  rep.trend = trend_against(std::span<const double>(x), std::span<const Complex>(y));
  for (const Complex& v : rep.delta) rep.trend.max_abs = std::max(rep.trend.max_abs, std::abs(v));
  rep.verdict = rep.trend.bounded(opts.slope_threshold) ? TrendVerdict::bounded_trend : TrendVerdict::growing;
  return rep;
}

double lidskii_check(const Matrix& T) {
  const EigenSequence seq = eigenvalue_sequence(T, "lidskii_check");
  Complex s{0.0, 0.0};
  for (const Complex& v : seq.values) s += v;
  return std::abs(T.trace() - s);
}

double product_trace_check(const Matrix& A, const Matrix& S) {
  if (A.rows() != S.rows() || A.cols() != S.cols() || A.rows() != A.cols())
    throw InvalidArgument("product_trace_check: A and S must be square of the same size");
  const double herm_gap = (S - S.adjoint()).cwiseAbs().maxCoeff();
  if (herm_gap > 1e-12 * std::max(1.0, S.cwiseAbs().maxCoeff()))
    throw InvalidArgument("product_trace_check: S is not Hermitian");
  const HermitianEigen eig = hermitian_eigen(S, "product_trace_check");
  Complex s{0.0, 0.0};
  for (std::size_t n = 0; n < eig.values.size(); ++n) {
    const auto e = eig.vectors.col(static_cast<Eigen::Index>(n));
    s += e.dot(A * e) * eig.values[n];
  }
  return std::abs((A * S).trace() - s);
}

ModulationProfile modulation_profile(const Matrix& T, const Matrix& V, int levels) {
  if (T.rows() != T.cols() || V.rows() != T.rows() || V.cols() != T.cols())
    throw InvalidArgument("modulation_profile: T and V must be square of the same size");
  if (levels < 1) throw InvalidArgument("modulation_profile: levels must be >= 1");
  const Eigen::Index n = V.rows();
  const double off = (V - Matrix(V.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  std::vector<double> diag(static_cast<std::size_t>(n));
  double vmax = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex v = V(i, i);
    if (std::abs(v.imag()) > 1e-12 || v.real() < -1e-12)
      throw InvalidArgument("modulation_profile: V must have non-negative real diagonal");
    diag[static_cast<std::size_t>(i)] = std::max(v.real(), 0.0);
    vmax = std::max(vmax, v.real());
  }
  if (n > 0 && off > 1e-12 * std::max(vmax, 1.0)) throw InvalidArgument("modulation_profile: V must be diagonal");

  ModulationProfile prof;
  prof.scale = vmax > 0.0 ? vmax : 1.0;
  const Eigen::VectorXd col_norm2 = T.colwise().squaredNorm().transpose();
  std::vector<double> x;
  for (int level = 1; level <= levels; ++level) {
    const double threshold = std::ldexp(1.0, -level);
    double hs2 = 0.0;
    bool any = false;
    for (Eigen::Index b = 0; b < n; ++b) {
      if (diag[static_cast<std::size_t>(b)] / prof.scale <= threshold) {
        hs2 += col_norm2(b);
        any = true;
      }
    }
    if (!any) {
      prof.notice = "mask empty from level " + std::to_string(level) + " (2^-" + std::to_string(level) +
                    " below the smallest diagonal entry of V); series truncated";
      break;
    }
    prof.level.push_back(level);
    prof.c.push_back(std::sqrt(hs2) * std::pow(2.0, 0.5 * level));
    x.push_back(level);
  }
  prof.trend = trend_against(std::span<const double>(x), std::span<const double>(prof.c));
  prof.sup = prof.trend.max_abs;
  return prof;
}

TailEnergy tail_energy(const Matrix& T, std::span<const std::size_t> n_grid) {
  const auto N = static_cast<std::size_t>(T.cols());
  const Eigen::VectorXd col_norm2 = T.colwise().squaredNorm().transpose();
  std::vector<double> suffix(N + 1, 0.0);
  for (std::size_t k = N; k-- > 0;) suffix[k] = suffix[k + 1] + col_norm2(static_cast<Eigen::Index>(k));

  TailEnergy out;
  std::vector<double> log_n;
  for (std::size_t n : n_grid) {
    if (n < 1 || n >= N) throw InvalidArgument("tail_energy: n=" + std::to_string(n) + " outside [1, N)");
    out.n.push_back(n);
    out.e.push_back(static_cast<double>(n) * suffix[n]);
    log_n.push_back(std::log(static_cast<double>(n)));
  }
  out.trend = trend_against(std::span<const double>(log_n), std::span<const double>(out.e));
  out.sup = out.trend.max_abs;
  return out;
}

}  // namespace pdolab
