#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pdolab/errors.hpp"
#include "pdolab/quadrature.hpp"

using namespace pdolab;

namespace {

double integrate(const QuadratureRule& r, auto f) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("gauss-legendre is exact up to degree 2n-1") {
    for (int n : {1, 2, 5, 16, 40}) {
      const auto r = gauss_legendre(n, -1.0, 3.0);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        const double exact = (std::pow(3.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
        CHECK(integrate(r, [k](double x) { return std::pow(x, k); }) ==
              doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("gauss-legendre rejects n < 1") { CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument); }

  TEST_CASE("composite rule honours breakpoints and panel width") {
    const double brk[] = {0.3, 1.7};
    const auto r = composite_gauss_legendre(0.0, 2.0, 8, 0.5, brk);
    // |x - 0.3| has a kink at the breakpoint; the split makes it exact.
    CHECK(integrate(r, [](double x) { return std::abs(x - 0.3); }) ==
          doctest::Approx(0.5 * 0.09 + 0.5 * 1.7 * 1.7).epsilon(1e-14));
    CHECK(integrate(r, [](double x) { return std::exp(x); }) == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
  }

  TEST_CASE("tensor rule integrates separable functions") {
    const double lo[] = {0.0, -1.0};
    const double hi[] = {1.0, 2.0};
    const auto r = tensor_gauss_legendre(lo, hi, 12);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto p = r.point(i);
      s += r.weights[i] * std::exp(p[0]) * p[1] * p[1];
    }
    CHECK(s == doctest::Approx((std::exp(1.0) - 1.0) * 3.0).epsilon(1e-13));
  }

  TEST_CASE("sphere rules carry the sphere measure") {
    for (int d = 1; d <= 3; ++d) {
      const auto r = sphere_rule(d, 32);
      double total = 0.0;
      for (double w : r.weights) total += w;
      CHECK(total == doctest::Approx(sphere_volume(d)).epsilon(1e-13));
      for (std::size_t i = 0; i < r.size(); ++i) {
        double n2 = 0.0;
        for (double c : r.direction(i)) n2 += c * c;
        CHECK(n2 == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
    CHECK(sphere_volume(1) == 2.0);
    CHECK(sphere_volume(2) == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(sphere_volume(3) == doctest::Approx(4.0 * std::numbers::pi));
  }

  TEST_CASE("S0 is the counting measure on {-1, 1}") {
    const auto r = sphere_rule(1, 8);
    REQUIRE(r.size() == 2);
    CHECK(r.directions[0] * r.directions[1] == -1.0);
    CHECK(r.weights[0] == 1.0);
    CHECK(r.weights[1] == 1.0);
  }

  TEST_CASE("sphere rule integrates s_1^2 exactly") {
    for (int d = 2; d <= 3; ++d) {
      const auto r = sphere_rule(d, 16);
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * r.direction(i)[0] * r.direction(i)[0];
      CHECK(s == doctest::Approx(sphere_volume(d) / d).epsilon(1e-13));
    }
  }

  TEST_CASE("smoothstep is a C2 ramp") {
    CHECK(smoothstep(-1.0) == 0.0);
    CHECK(smoothstep(0.0) == 0.0);
    CHECK(smoothstep(1.0) == 1.0);
    CHECK(smoothstep(2.0) == 1.0);
    CHECK(smoothstep(0.5) == doctest::Approx(0.5));
    const double h = 1e-4;
    CHECK(std::abs(smoothstep(h) - 0.0) < 1e-10);
    CHECK(std::abs(1.0 - smoothstep(1.0 - h)) < 1e-10);
  }

  TEST_CASE("quad spec validation") {
    QuadSpec q;
    CHECK(q.x_nodes_for(1) == 96);
    CHECK(q.x_nodes_for(2) == 64);
    CHECK(q.x_nodes_for(3) == 32);
    q.radial_nodes = 0;
    CHECK_THROWS_AS(q.validate(), InvalidArgument);
  }
}
