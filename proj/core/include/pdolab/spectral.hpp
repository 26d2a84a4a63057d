#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pdolab/operator.hpp"
#include "pdolab/quadrature.hpp"
#include "pdolab/symbol.hpp"
#include "pdolab/trend.hpp"

namespace pdolab {

enum class SequenceKind { eigen, singular };

/// Eigenvalues (with algebraic multiplicity) or singular values, ordered by
/// |value| non-increasing, ties by descending real part then descending
/// imaginary part. Entries past the stored length are zero.
struct EigenSequence {
  std::vector<Complex> values;
  SequenceKind kind = SequenceKind::eigen;

  std::size_t size() const { return values.size(); }
  Complex at(std::size_t j) const { return j < values.size() ? values[j] : Complex{0.0, 0.0}; }
};

void sort_eigenvalues(std::vector<Complex>& values);

/// Pins the dense LAPACK backend to a fixed thread count (bit-stable results
/// require a fixed configuration).
void pin_dense_solver_threads(int threads);

EigenSequence eigenvalue_sequence(const Matrix& T, const std::string& label = "matrix");
EigenSequence eigenvalue_sequence(const OperatorMatrix& T);

EigenSequence singular_values(const Matrix& T, const std::string& label = "matrix");
EigenSequence singular_values(const OperatorMatrix& T);

/// Eigenpairs of a Hermitian matrix, ordered like EigenSequence.
struct HermitianEigen {
  std::vector<double> values;
  Matrix vectors;  ///< columns in the same order as values
};
HermitianEigen hermitian_eigen(const Matrix& S, const std::string& label = "matrix");

/// max_n n^{1/p} a*_n over the decreasing rearrangement of |values|.
double weak_lp_seminorm(const EigenSequence& seq, double p);

struct DeviationSeries {
  std::vector<std::size_t> n;
  std::vector<Complex> eigen_sum;    ///< sum_{j<=n} lambda_j(T)
  std::vector<Complex> symbol_term;  ///< (2pi)^{-d} V(n), V at radius n^{1/d}
  std::vector<Complex> deviation;    ///< eigen_sum - symbol_term
  TrendReport trend;                 ///< deviation against log n
};

/// Eigenvalue partial sums against symbol ball integrals. Requires every n
/// to be at most N/2 (truncation guard).
DeviationSeries eigensum_vs_symbol(const OperatorMatrix& T, const Symbol& sym, std::span<const std::size_t> n_grid,
                                   const QuadSpec& quad = {});
DeviationSeries eigensum_vs_symbol(const EigenSequence& eigen, std::size_t matrix_size, const Symbol& sym,
                                   std::span<const std::size_t> n_grid, const QuadSpec& quad = {});

struct CommutatorDiagnosticOptions {
  double slope_threshold = 0.05;
  std::size_t fit_from = 10;  ///< trend is fitted on n >= fit_from
};

enum class TrendVerdict { bounded_trend, growing };

struct CommutatorReport {
  std::vector<Complex> delta;  ///< delta[n-1] = sum_{j<=n} (a_j - b_j)
  TrendReport trend;
  TrendVerdict verdict = TrendVerdict::bounded_trend;
};

/// Finite-scale reading of "sum_{j<=n}(a_j - b_j) = O(1)"; the shorter
/// sequence is zero-padded.
CommutatorReport commutator_difference_diagnostic(const EigenSequence& a, const EigenSequence& b,
                                                  CommutatorDiagnosticOptions opts = {});

/// |trace(T) - sum_j lambda_j(T)|.
double lidskii_check(const Matrix& T);

/// |trace(AS) - sum_n (A e_n, e_n) lambda_n(S)| with e_n the eigenvectors of
/// the Hermitian S. Throws InvalidArgument when S is not Hermitian.
double product_trace_check(const Matrix& A, const Matrix& S);

struct ModulationProfile {
  std::vector<int> level;
  std::vector<double> c;  ///< 2^{n/2} ||T chi_[0,2^-n](V)||_HS
  double scale = 1.0;     ///< V was divided by this to get ||V|| = 1
  double sup = 0.0;
  TrendReport trend;      ///< c against level n
  std::string notice;     ///< set when the series was cut short
};

/// V must be diagonal with non-negative entries in the working basis.
ModulationProfile modulation_profile(const Matrix& T, const Matrix& V, int levels);

struct TailEnergy {
  std::vector<std::size_t> n;
  std::vector<double> e;  ///< n sum_{k>n} ||T e_k||^2
  double sup = 0.0;
  TrendReport trend;      ///< e against log n
};

TailEnergy tail_energy(const Matrix& T, std::span<const std::size_t> n_grid);

}  // namespace pdolab
