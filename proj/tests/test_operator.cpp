#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "pdolab/basis.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/matrix_cache.hpp"
#include "pdolab/operator.hpp"
#include "pdolab/quadrature.hpp"
#include "pdolab/spectral.hpp"
#include "support.hpp"

using namespace pdolab;
using pdolab::testing::benchmark_bump;
using pdolab::testing::benchmark_symbol;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute force: (2 pi)^-1 int e^{i (m_b - m_a) x} p(x, m_b) dx by composite
// Gauss-Legendre over the support (no FFT, no periodic grid).
Complex brute_force_entry(const Symbol& p, int ma, int mb) {
  const Box& box = p.x_support();
  const auto rule = composite_gauss_legendre(box.lo[0], box.hi[0], 20, 0.05);
  Complex s{0.0, 0.0};
  const std::vector<double> xi{static_cast<double>(mb)};
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const std::vector<double> x{rule.nodes[i]};
    s += rule.weights[i] * std::exp(Complex{0.0, (mb - ma) * x[0]}) * p(x, xi);
  }
  return s / (2.0 * kPi);
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_SUITE("operator") {
  TEST_CASE("x-independent symbol gives diag(g(m_b))") {
    const auto g = [](std::span<const double> xi) { return Complex{japanese_bracket_power(xi, 1.0), 0.3 * xi[0]}; };
    const Symbol p(1, Box::torus(1), [g](std::span<const double>, std::span<const double> xi) { return g(xi); });
    const FrequencyBasis b = enumerate_frequencies(1, 6);
    const OperatorMatrix T = assemble_operator(p, b);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::vector<double> xi{static_cast<double>(b.freq(j)[0])};
      CHECK(std::abs(T.entries(j, j) - g(xi)) < 1e-14);
    }
    CHECK(max_abs(T.entries - Matrix(T.entries.diagonal().asDiagonal())) < 1e-14);
  }

  TEST_CASE("xi-independent symbol gives the Toeplitz matrix of f^") {
    const Bump w = benchmark_bump();
    const Symbol p(1, w.support(), [w](std::span<const double> x, std::span<const double>) { return Complex{w(x), 0.0}; });
    const FrequencyBasis b = enumerate_frequencies(1, 5);
    AssemblyOptions fine;
    fine.x_quad_nodes = 512;
    const OperatorMatrix T = assemble_operator(p, b, fine);
    const auto fhat = torus_fourier_coefficients([w](std::span<const double> x) { return Complex{w(x), 0.0}; }, 1, 10, 512);
    for (std::size_t a = 0; a < b.size(); ++a)
      for (std::size_t c = 0; c < b.size(); ++c) {
        const int k = b.freq(a)[0] - b.freq(c)[0];
        CHECK(std::abs(T.entries(a, c) - fhat[static_cast<std::size_t>(k + 10)]) < 1e-13);
      }
  }

  TEST_CASE("product symbol matches brute-force double quadrature at K=2") {
    const Bump w = Bump::with_integral({0.3}, 1.7, 1.0);
    const Symbol p = make_product_symbol(
        [w](std::span<const double> x) { return Complex{w(x), 0.5 * w(x) * x[0]}; },
        [](std::span<const double> xi) { return Complex{japanese_bracket_power(xi, 1.0), 0.0}; }, 1, w.support());
    const FrequencyBasis b = enumerate_frequencies(1, 2);
    AssemblyOptions fine;
    fine.x_quad_nodes = 512;
    const OperatorMatrix T = assemble_operator(p, b, fine);
    for (std::size_t a = 0; a < b.size(); ++a)
      for (std::size_t c = 0; c < b.size(); ++c)
        CHECK(std::abs(T.entries(a, c) - brute_force_entry(p, b.freq(a)[0], b.freq(c)[0])) < 1e-12);
    // and as M_f times the diagonal of g
    const OperatorMatrix M = multiplication_operator(
        [w](std::span<const double> x) { return Complex{w(x), 0.5 * w(x) * x[0]}; }, b, fine);
    const OperatorMatrix L = laplacian_multiplier(b, 1.0);
    CHECK(max_abs(T.entries - M.entries * L.entries) < 1e-14);
  }

  TEST_CASE("general (classical) symbol matches brute-force double quadrature") {
    const Symbol p = benchmark_symbol(1);
    const FrequencyBasis b = enumerate_frequencies(1, 3);
    AssemblyOptions fine;
    fine.x_quad_nodes = 512;
    const OperatorMatrix T = assemble_operator(p, b, fine);
    for (std::size_t a = 0; a < b.size(); ++a)
      for (std::size_t c = 0; c < b.size(); ++c)
        CHECK(std::abs(T.entries(a, c) - brute_force_entry(p, b.freq(a)[0], b.freq(c)[0])) < 1e-12);
  }

  TEST_CASE("quantization is exact on trigonometric symbols (sign convention)") {
    SUBCASE("d=1, k=2") {
      const Symbol p(1, Box::torus(1), [](std::span<const double> x, std::span<const double> xi) {
        return std::exp(Complex{0.0, 2.0 * x[0]}) / (1.0 + xi[0] * xi[0]);
      });
      const FrequencyBasis b = enumerate_frequencies(1, 3);
      const OperatorMatrix T = assemble_operator(p, b);
      for (std::size_t a = 0; a < b.size(); ++a)
        for (std::size_t c = 0; c < b.size(); ++c) {
          const int mb = b.freq(c)[0];
          const double expect = (b.freq(a)[0] - mb == 2) ? 1.0 / (1.0 + mb * mb) : 0.0;
          CHECK(std::abs(T.entries(a, c) - expect) < 1e-14);
        }
    }
    SUBCASE("d=2, k=(1,-1)") {
      const Symbol p(2, Box::torus(2), [](std::span<const double> x, std::span<const double> xi) {
        return std::exp(Complex{0.0, x[0] - x[1]}) * Complex{1.0 + xi[0], xi[1]};
      });
      const FrequencyBasis b = enumerate_frequencies(2, 3);
      const OperatorMatrix T = assemble_operator(p, b);
      for (std::size_t a = 0; a < b.size(); ++a)
        for (std::size_t c = 0; c < b.size(); ++c) {
          const auto ma = b.freq(a), mb = b.freq(c);
          const Complex expect = (ma[0] - mb[0] == 1 && ma[1] - mb[1] == -1) ? Complex{1.0 + mb[0], 1.0 * mb[1]}
                                                                              : Complex{0.0, 0.0};
          CHECK(std::abs(T.entries(a, c) - expect) < 1e-13);
        }
    }
  }

  TEST_CASE("support near the torus edge is rejected") {
    const Bump w{{0.0}, 3.1, 1.0};
    const Symbol p(1, w.support(), [w](std::span<const double> x, std::span<const double>) { return Complex{w(x), 0.0}; });
    CHECK_THROWS_AS(assemble_operator(p, enumerate_frequencies(1, 2)), InvalidArgument);
    CHECK_THROWS_AS(assemble_operator(benchmark_symbol(2), enumerate_frequencies(1, 2)), InvalidArgument);
  }

  TEST_CASE("laplacian multiplier") {
    const FrequencyBasis b = enumerate_frequencies(1, 1);
    const OperatorMatrix L = laplacian_multiplier(b, 1.0);
    CHECK(L.entries(0, 0).real() == 1.0);
    CHECK(L.entries(1, 1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(L.entries(2, 2).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(max_abs(L.entries - Matrix(L.entries.diagonal().asDiagonal())) == 0.0);
    const FrequencyBasis b2 = enumerate_frequencies(2, 4);
    CHECK(max_abs(laplacian_multiplier(b2, 0.0).entries - Matrix::Identity(81, 81)) == 0.0);
    const OperatorMatrix L2 = laplacian_multiplier(b2, 2.0);
    for (Eigen::Index j = 1; j < 81; ++j) CHECK(L2.entries(j, j).real() <= L2.entries(j - 1, j - 1).real());
  }

  TEST_CASE("Weyl bound for (1 - Laplacian)^{-d/2}") {
    {
      const FrequencyBasis b = enumerate_frequencies(1, 300);
      const EigenSequence s = singular_values(laplacian_multiplier(b, 1.0));
      for (std::size_t n = 10; n <= b.size(); ++n) {
        const double v = static_cast<double>(n) * s.at(n - 1).real();
        CHECK(v >= 0.4);
        CHECK(v <= 2.5);
      }
    }
    {
      const FrequencyBasis b = enumerate_frequencies(2, 20);
      const EigenSequence s = singular_values(laplacian_multiplier(b, 2.0));
      double lo = 1e9, hi = 0.0;
      for (std::size_t n = 10; n <= b.size() / 2; ++n) {
        const double v = static_cast<double>(n) * s.at(n - 1).real();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      CHECK(lo > 1.0);
      CHECK(hi < 5.0);
    }
  }

  TEST_CASE("multiplication operator examples") {
    const FrequencyBasis b = enumerate_frequencies(1, 6);
    const OperatorMatrix I = multiplication_operator([](std::span<const double>) { return Complex{1.0, 0.0}; }, b);
    CHECK(max_abs(I.entries - Matrix::Identity(13, 13)) < 1e-15);
    const OperatorMatrix C = multiplication_operator([](std::span<const double> x) { return Complex{std::cos(x[0]), 0.0}; }, b);
    for (std::size_t a = 0; a < b.size(); ++a)
      for (std::size_t c = 0; c < b.size(); ++c) {
        const double expect = std::abs(b.freq(a)[0] - b.freq(c)[0]) == 1 ? 0.5 : 0.0;
        CHECK(std::abs(C.entries(a, c) - expect) < 1e-15);
      }
    const Bump w = benchmark_bump(2);
    const OperatorMatrix W = multiplication_operator([w](std::span<const double> x) { return Complex{w(x), 0.0}; },
                                                     enumerate_frequencies(2, 4));
    CHECK(max_abs(W.entries - W.entries.adjoint()) < 1e-12);
  }

  TEST_CASE("self-adjoint realizations") {
    const Symbol p(1, Box::torus(1), [](std::span<const double>, std::span<const double> xi) {
      return Complex{1.0 / (2.0 + xi[0] * xi[0]), 0.0};
    });
    const OperatorMatrix T = assemble_operator(p, enumerate_frequencies(1, 10));
    CHECK(max_abs(T.entries - T.entries.adjoint()) < 1e-10);
  }

  TEST_CASE("truncation consistency of the leading eigenvalues") {
    const Symbol p = benchmark_symbol(1);
    const EigenSequence a = eigenvalue_sequence(assemble_operator(p, enumerate_frequencies(1, 64)));
    const EigenSequence b = eigenvalue_sequence(assemble_operator(p, enumerate_frequencies(1, 128)));
    const std::size_t top = a.size() / 4;
    for (std::size_t j = 0; j < top; ++j) {
      INFO("j = " << j);
      CHECK(std::abs(a.at(j) - b.at(j)) <= 0.01 * std::abs(b.at(j)));
    }
  }

  TEST_CASE("torus diagonal sums: diag(1/n)") {
    const std::size_t N = 4000;
    std::vector<Complex> diag(N);
    for (std::size_t j = 0; j < N; ++j) diag[j] = 1.0 / static_cast<double>(j + 1);
    const std::size_t grid[] = {10, 100, 1000, 4000};
    for (int d = 1; d <= 3; ++d) {
      const DiagonalSums s = torus_diagonal_sums(diag, d, grid);
      double prev = 1e300;
      for (std::size_t i = 0; i < s.n.size(); ++i) {
        double h = 0.0;
        for (std::size_t j = 1; j <= s.n[i]; ++j) h += 1.0 / static_cast<double>(j);
        const double norm = d * std::pow(2.0 * kPi, d);
        CHECK(s.residue[i].real() == doctest::Approx(norm * h / std::log1p(static_cast<double>(s.n[i]))).epsilon(1e-13));
        CHECK(s.residue[i].real() < prev);
        CHECK(s.residue[i].real() > norm);
        prev = s.residue[i].real();
      }
    }
  }

  TEST_CASE("torus diagonal sums: M_f (1 - Laplacian)^{-1/2}, f = 1 + cos x, tends to 4 pi") {
    const PointFn f = [](std::span<const double> x) { return Complex{1.0 + std::cos(x[0]), 0.0}; };
    const FrequencyBasis big = enumerate_frequencies(1, 50000, 100001);
    const auto diag = multiplier_product_diagonal(f, big, 1.0);
    const std::size_t grid[] = {100, 10000, 100000};
    const DiagonalSums s = torus_diagonal_sums(diag, 1, grid);
    // oracle: sum_{j<=n} <m_j>^-1 with m_j = 0, -1, 1, -2, 2, ...
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      double h = 0.0;
      for (std::size_t j = 1; j <= s.n[i]; ++j) {
        const double m = static_cast<double>(j / 2);
        h += 1.0 / std::sqrt(1.0 + m * m);
      }
      CHECK(s.partial_sum[i].real() == doctest::Approx(h).epsilon(1e-12));
    }
    CHECK(std::abs(s.residue.back().real() - 4.0 * kPi) / (4.0 * kPi) < 0.02);
    // the assembled matrix gives the same diagonal
    const FrequencyBasis small = enumerate_frequencies(1, 20);
    const OperatorMatrix T{small, multiplication_operator(f, small).entries * laplacian_multiplier(small, 1.0).entries, "T"};
    const std::size_t g2[] = {5, 41};
    const DiagonalSums s2 = torus_diagonal_sums(T, g2);
    const DiagonalSums s3 = torus_diagonal_sums(std::span<const Complex>(diag).first(41), 1, g2);
    CHECK(std::abs(s2.partial_sum[1] - s3.partial_sum[1]) < 1e-13);
  }

  TEST_CASE("torus diagonal sums: strictly upper triangular is zero") {
    const FrequencyBasis b = enumerate_frequencies(1, 5);
    Matrix U = Matrix::Zero(11, 11);
    for (int i = 0; i < 11; ++i)
      for (int j = i + 1; j < 11; ++j) U(i, j) = Complex{1.0 + i, -1.0 * j};
    const std::size_t grid[] = {1, 5, 11};
    for (const Complex& v : torus_diagonal_sums(OperatorMatrix{b, U, "U"}, grid).partial_sum) CHECK(v == Complex{});
    const std::size_t bad[] = {12};
    CHECK_THROWS_AS(torus_diagonal_sums(OperatorMatrix{b, U, "U"}, bad), InvalidArgument);
  }

  TEST_CASE("matrix cache round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "pdolab_cache_test";
    std::filesystem::create_directories(dir);
    const OperatorMatrix T = assemble_operator(benchmark_symbol(2), enumerate_frequencies(2, 3));
    write_matrix_cache(dir / "t128.bin", T);
    const OperatorMatrix R = read_matrix_cache(dir / "t128.bin");
    CHECK(R.label == T.label);
    CHECK(R.basis.cutoff() == 3);
    CHECK(R.basis.dim() == 2);
    CHECK(max_abs(R.entries - T.entries) == 0.0);

    write_matrix_cache(dir / "t64.bin", T, CachePrecision::complex64);
    CHECK(max_abs(read_matrix_cache(dir / "t64.bin").entries - T.entries) < 1e-7 * max_abs(T.entries));
    CHECK(std::filesystem::file_size(dir / "t64.bin") < std::filesystem::file_size(dir / "t128.bin"));

    // header fields are little-endian at documented offsets
    std::ifstream in(dir / "t128.bin", std::ios::binary);
    char head[36];
    in.read(head, 36);
    CHECK(std::string(head, 8) == "PDOLABM1");
    CHECK(static_cast<unsigned char>(head[12]) == 2);
    CHECK(static_cast<unsigned char>(head[16]) == 3);
    CHECK(static_cast<unsigned char>(head[20]) == 16);
    CHECK(static_cast<unsigned char>(head[24]) == 49);
    in.close();

    // flip one payload byte
    {
      std::fstream f(dir / "t128.bin", std::ios::binary | std::ios::in | std::ios::out);
      f.seekp(-3, std::ios::end);
      f.put('\x5a');
    }
    CHECK_THROWS_AS(read_matrix_cache(dir / "t128.bin"), Error);
    {
      std::ofstream f(dir / "junk.bin", std::ios::binary);
      f << "NOTACACHEFILE.....................................";
    }
    CHECK_THROWS_AS(read_matrix_cache(dir / "junk.bin"), Error);
    std::filesystem::remove_all(dir);
  }
}
