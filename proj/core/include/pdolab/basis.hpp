#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pdolab {

/// Truncated Fourier basis {e^{i<m,x>} : |m|_inf <= K} of the period-2pi torus,
/// ordered by non-decreasing Euclidean |m| with lexicographic tie-break. That
/// order is also the order of the flat Laplace-Beltrami eigenvalues |m|^2, so
/// partial sums over the first n basis vectors are partial sums over the
/// eigenbasis of (1 - Laplacian)^{-d/2}.
///
/// Count calibration: the number of frequencies with |m| <= R is
/// Vol(B_1) R^d (1 + o(1)) = (Vol S^{d-1} / d) R^d (1 + o(1)), which is the
/// same pairing of n with radius n^{1/d} used by the residue series.
class FrequencyBasis {
 public:
  FrequencyBasis(int d, int K, std::vector<int> flat_freqs);

  int dim() const { return d_; }
  int cutoff() const { return K_; }
  std::size_t size() const { return freqs_.size() / static_cast<std::size_t>(d_); }

  std::span<const int> freq(std::size_t j) const {
    return {freqs_.data() + j * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  long norm_squared(std::size_t j) const;

 private:
  int d_;
  int K_;
  std::vector<int> freqs_;
};

/// Matrix-size budget: PDOLAB_MAX_MATRIX_N if set, else 6000.
std::size_t matrix_size_budget();

/// Throws BudgetExceeded when (2K+1)^d exceeds the budget (the configured
/// matrix budget unless an explicit one is given).
FrequencyBasis enumerate_frequencies(int d, int K, std::optional<std::size_t> budget = std::nullopt);

}  // namespace pdolab
