#pragma once

#include <complex>
#include <random>
#include <span>

#include "pdolab/operator.hpp"
#include "pdolab/symbol.hpp"

namespace pdolab::testing {

/// The benchmark bump w: centred, half-width 2.5, integral 1.
inline Bump benchmark_bump(int d = 1) {
  return Bump::with_integral(std::vector<double>(static_cast<std::size_t>(d), 0.0), 2.5, 1.0);
}

/// principal(x, s) = w(x) (even) or w(x) s_1 (odd), cutoff 1.
inline Symbol benchmark_symbol(int d = 1, bool odd = false) {
  const Bump w = benchmark_bump(d);
  PrincipalFn p = [w, odd](std::span<const double> x, std::span<const double> s) {
    return Complex{odd ? w(x) * s[0] : w(x), 0.0};
  };
  return make_classical_symbol(d, p, 1.0, w.support());
}

inline Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex{g(rng), g(rng)};
  return m;
}

inline Matrix random_hermitian(int n, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, rng);
  return 0.5 * (a + a.adjoint());
}

inline Matrix random_unitary(int n, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(n, n);
}

}  // namespace pdolab::testing
