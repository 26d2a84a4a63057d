#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pdolab/basis.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/spectral.hpp"
#include "pdolab/traces.hpp"
#include "support.hpp"

using namespace pdolab;
using pdolab::testing::benchmark_symbol;
using pdolab::testing::random_hermitian;
using pdolab::testing::random_matrix;

namespace {

Matrix diag_of(std::initializer_list<Complex> v) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const Complex& c : v) m(i, i) = c, ++i;
  return m;
}

EigenSequence singular_seq(std::vector<double> v) {
  EigenSequence s;
  s.kind = SequenceKind::singular;
  for (double x : v) s.values.emplace_back(x, 0.0);
  return s;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("eigenvalue ordering examples") {
    const EigenSequence e = eigenvalue_sequence(diag_of({3.0, 1.0, -2.0}));
    REQUIRE(e.size() == 3);
    CHECK(std::abs(e.at(0) - 3.0) < 1e-14);
    CHECK(std::abs(e.at(1) + 2.0) < 1e-14);
    CHECK(std::abs(e.at(2) - 1.0) < 1e-14);
    CHECK(e.at(7) == Complex{0.0, 0.0});

    const EigenSequence t = eigenvalue_sequence(diag_of({-1.0, Complex{0, -1}, 1.0, Complex{0, 1}}));
    const Complex expect[] = {1.0, Complex{0, 1}, Complex{0, -1}, -1.0};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(t.at(i) - expect[i]) < 1e-14);
  }

  TEST_CASE("nilpotent matrix has zero eigenvalues") {
    Matrix n = Matrix::Zero(2, 2);
    n(0, 1) = 1.0;
    const EigenSequence e = eigenvalue_sequence(n);
    CHECK(std::abs(e.at(0)) < 1e-15);
    CHECK(std::abs(e.at(1)) < 1e-15);
  }

  TEST_CASE("eigenvalues sum to the trace") {
    std::mt19937_64 rng(7);
    const Matrix m = random_matrix(30, rng);
    const EigenSequence e = eigenvalue_sequence(m);
    Complex s{0.0, 0.0};
    for (const Complex& v : e.values) s += v;
    CHECK(std::abs(s - m.trace()) <= 1e-9 * std::abs(m.trace()));
    for (std::size_t j = 1; j < e.size(); ++j) CHECK(std::abs(e.at(j)) <= std::abs(e.at(j - 1)));
  }

  TEST_CASE("eigensolver rejects non-finite input") {
    Matrix m = Matrix::Identity(3, 3);
    m(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigenvalue_sequence(m), InvalidArgument);
    CHECK_THROWS_AS(eigenvalue_sequence(Matrix::Zero(2, 3)), InvalidArgument);
  }

  TEST_CASE("singular values") {
    const EigenSequence s = singular_values(diag_of({-2.0, 1.0}));
    CHECK(s.kind == SequenceKind::singular);
    CHECK(s.at(0).real() == doctest::Approx(2.0));
    CHECK(s.at(1).real() == doctest::Approx(1.0));
    Matrix F(8, 8);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) F(a, b) = std::polar(1.0 / std::sqrt(8.0), -2.0 * std::numbers::pi * a * b / 8.0);
    for (const Complex& v : singular_values(F).values) CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("hermitian eigen ordering and reconstruction") {
    std::mt19937_64 rng(11);
    const Matrix S = random_hermitian(25, rng);
    const HermitianEigen h = hermitian_eigen(S);
    for (std::size_t j = 1; j < h.values.size(); ++j) CHECK(std::abs(h.values[j]) <= std::abs(h.values[j - 1]));
    Eigen::VectorXd lam(25);
    for (int j = 0; j < 25; ++j) lam(j) = h.values[static_cast<std::size_t>(j)];
    const Matrix back = h.vectors * lam.cast<Complex>().asDiagonal() * h.vectors.adjoint();
    CHECK((back - S).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("weak lp seminorm") {
    std::vector<double> a, b;
    for (int n = 1; n <= 500; ++n) {
      a.push_back(1.0 / n);
      b.push_back(1.0 / std::sqrt(n));
    }
    CHECK(weak_lp_seminorm(singular_seq(a), 1.0) == doctest::Approx(1.0));
    CHECK(weak_lp_seminorm(singular_seq(b), 2.0) == doctest::Approx(1.0));
    const EigenSequence lap = singular_values(laplacian_multiplier(enumerate_frequencies(1, 500), 1.0));
    const double v = weak_lp_seminorm(lap, 1.0);
    CHECK(v >= 1.9);
    CHECK(v <= 2.6);
    CHECK_THROWS_AS(weak_lp_seminorm(EigenSequence{}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(weak_lp_seminorm(singular_seq(a), 0.5), InvalidArgument);
  }

  TEST_CASE("eigensum vs symbol: zero symbol") {
    const FrequencyBasis b = enumerate_frequencies(1, 16);
    const OperatorMatrix T = assemble_operator(make_zero_symbol(1), b);
    const std::size_t grid[] = {2, 8, 16};
    const DeviationSeries D = eigensum_vs_symbol(T, make_zero_symbol(1), grid);
    for (const Complex& v : D.deviation) CHECK(std::abs(v) == 0.0);
  }

  TEST_CASE("eigensum vs symbol: x-independent <xi>^-1 against the enumeration oracle") {
    const Symbol g = make_product_symbol([](std::span<const double>) { return Complex{1.0, 0.0}; },
                                         [](std::span<const double> xi) { return Complex{japanese_bracket_power(xi, 1.0), 0.0}; },
                                         1, Box::torus(1), true);
    const FrequencyBasis b = enumerate_frequencies(1, 200);
    const OperatorMatrix T = assemble_operator(g, b);
    const std::size_t grid[] = {1, 7, 40, 200};
    const DeviationSeries D = eigensum_vs_symbol(T, g, grid);
    for (std::size_t i = 0; i < D.n.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 1; j <= D.n[i]; ++j) {
        const double m = static_cast<double>(j / 2);
        s += 1.0 / std::sqrt(1.0 + m * m);
      }
      const double oracle = s - 2.0 * std::asinh(static_cast<double>(D.n[i]));
      CHECK(D.deviation[i].real() == doctest::Approx(oracle).epsilon(1e-8).scale(1.0));
    }
    const std::size_t too_far[] = {201};
    CHECK_THROWS_AS(eigensum_vs_symbol(T, g, too_far), InvalidArgument);
  }

  TEST_CASE("eigensum vs symbol: classical symbol has a flat deviation") {
    const Symbol p = benchmark_symbol(1);
    const OperatorMatrix T = assemble_operator(p, enumerate_frequencies(1, 256));
    const auto grid = geometric_grid(20, 256, 12);
    const DeviationSeries D = eigensum_vs_symbol(T, p, grid);
    CHECK(std::abs(D.trend.slope()) < 0.05 * 2.0);
    CHECK(std::isfinite(D.trend.max_abs));
  }

  TEST_CASE("commutator difference diagnostic: trivial cases") {
    EigenSequence a;
    for (int j = 1; j <= 300; ++j) a.values.emplace_back(1.0 / j, 0.3 / j);
    const CommutatorReport same = commutator_difference_diagnostic(a, a);
    for (const Complex& v : same.delta) CHECK(v == Complex{0.0, 0.0});
    CHECK(same.verdict == TrendVerdict::bounded_trend);

    EigenSequence x, y;
    for (int j = 1; j <= 1000; ++j) {
      x.values.emplace_back(1.0 / j, 0.0);
      y.values.emplace_back(1.0 / (j + 1), 0.0);
    }
    const CommutatorReport r = commutator_difference_diagnostic(x, y);
    for (std::size_t n = 1; n <= r.delta.size(); ++n)
      CHECK(r.delta[n - 1].real() == doctest::Approx(1.0 - 1.0 / (n + 1.0)).epsilon(1e-12));
    CHECK(r.verdict == TrendVerdict::bounded_trend);

    EigenSequence shorter;
    shorter.values.assign(a.values.begin(), a.values.begin() + 100);
    const CommutatorReport pad = commutator_difference_diagnostic(a, shorter);
    CHECK(pad.delta.size() == 300);
    CHECK(std::abs(pad.delta[99]) == 0.0);
  }

  TEST_CASE("commutator difference diagnostic: non-measurable Q against c/j grows") {
    const OperatorMatrix Q = assemble_operator(make_nonmeasurable_symbol(1), enumerate_frequencies(1, 256));
    const EigenSequence a = eigenvalue_sequence(Q);
    for (double c : {0.0, 1.0 / std::numbers::pi, -1.0 / std::numbers::pi}) {
      EigenSequence b;
      for (std::size_t j = 1; j <= a.size(); ++j) b.values.emplace_back(c / static_cast<double>(j), 0.0);
      const CommutatorReport r = commutator_difference_diagnostic(a, b);
      INFO("c = " << c << " slope = " << r.trend.slope());
      CHECK(r.verdict == TrendVerdict::growing);
    }
  }

  TEST_CASE("lidskii check examples") {
    std::mt19937_64 rng(3);
    CHECK(lidskii_check(random_matrix(50, rng)) < 1e-9);
    CHECK(lidskii_check(random_hermitian(50, rng)) < 1e-11);
    Matrix n = Matrix::Zero(6, 6);
    for (int i = 0; i < 5; ++i) n(i, i + 1) = 2.0;
    CHECK(lidskii_check(n) == 0.0);
  }

  TEST_CASE("product trace check examples") {
    std::mt19937_64 rng(5);
    const Matrix A = random_matrix(30, rng);
    CHECK(product_trace_check(A, Matrix::Identity(30, 30)) < 1e-12);
    CHECK(product_trace_check(random_hermitian(40, rng), random_hermitian(40, rng)) < 1e-8);
    CHECK_THROWS_AS(product_trace_check(A, random_matrix(30, rng)), InvalidArgument);

    const FrequencyBasis b = enumerate_frequencies(1, 60);
    const PointFn f = [](std::span<const double> x) { return Complex{2.0 + std::cos(x[0]) + std::sin(3.0 * x[0]), 0.0}; };
    const Matrix M = multiplication_operator(f, b).entries;
    const Matrix S = laplacian_multiplier(b, 1.0).entries;
    double oracle = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) oracle += 2.0 / std::sqrt(1.0 + static_cast<double>(b.norm_squared(j)));
    CHECK(std::abs((M * S).trace() - oracle) < 1e-10);
    CHECK(product_trace_check(M, S) < 1e-8);
  }

  TEST_CASE("modulation profile: geometric diagonal") {
    Matrix V = Matrix::Zero(12, 12);
    for (int j = 1; j <= 12; ++j) V(j - 1, j - 1) = std::ldexp(1.0, -j);
    const ModulationProfile p = modulation_profile(V, V, 14);
    CHECK(p.scale == doctest::Approx(0.5));
    REQUIRE(p.c.size() == 11);
    CHECK_FALSE(p.notice.empty());
    for (int n = 1; n <= 11; ++n) {
      double tail = 0.0;
      for (int j = n + 1; j <= 12; ++j) tail += std::pow(4.0, -j);
      CHECK(p.c[static_cast<std::size_t>(n - 1)] == doctest::Approx(std::pow(2.0, 0.5 * n) * std::sqrt(tail)).epsilon(1e-13));
      if (n > 1) CHECK(p.c[static_cast<std::size_t>(n - 1)] < p.c[static_cast<std::size_t>(n - 2)]);
    }
  }

  TEST_CASE("modulation profile: T living on large-V coordinates") {
    const FrequencyBasis b = enumerate_frequencies(1, 20);
    const Matrix V = laplacian_multiplier(b, 1.0).entries;
    Matrix T = Matrix::Zero(41, 41);
    T(0, 0) = 1.0;
    T(5, 0) = 2.0;
    const ModulationProfile p = modulation_profile(T, V, 4);
    for (double c : p.c) CHECK(c == 0.0);
    CHECK_THROWS_AS(modulation_profile(T, T + Matrix::Identity(41, 41) * 0.0 + Matrix::Ones(41, 41), 3), InvalidArgument);
  }

  TEST_CASE("tail energy examples") {
    const int N = 2000;
    Matrix D = Matrix::Zero(N, N);
    for (int k = 1; k <= N; ++k) D(k - 1, k - 1) = 1.0 / k;
    const std::size_t grid[] = {10, 50, 100};
    const TailEnergy t = tail_energy(D, grid);
    for (std::size_t i = 0; i < 3; ++i) {
      double s = 0.0;
      for (int k = static_cast<int>(grid[i]) + 1; k <= N; ++k) s += 1.0 / (static_cast<double>(k) * k);
      CHECK(t.e[i] == doctest::Approx(grid[i] * s).epsilon(1e-12));
      CHECK(std::abs(t.e[i] - 1.0) < 0.06);
    }
    Matrix C = Matrix::Zero(30, 30);
    C.col(0).setConstant(Complex{1.0, -2.0});
    const std::size_t g2[] = {1, 4, 29};
    for (double e : tail_energy(C, g2).e) CHECK(e == 0.0);
    const std::size_t bad[] = {30};
    CHECK_THROWS_AS(tail_energy(C, bad), InvalidArgument);
  }

  TEST_CASE("modulation criteria for the classical benchmark") {
    const OperatorMatrix T = assemble_operator(benchmark_symbol(1), enumerate_frequencies(1, 256));
    const auto grid = geometric_grid(8, T.size() / 4, 12);
    const ModulationCheck m = modulation_check(T, default_modulation_levels(T.basis), grid, 0.1);
    CHECK(m.passed);
    CHECK(std::abs(m.profile.trend.slope()) <= 0.1);
    CHECK(std::abs(m.tail.trend.slope()) <= 0.1);
    CHECK(m.profile.notice.empty());
  }
}
