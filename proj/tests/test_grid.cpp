#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nvs/grid.hpp"

using nvs::Complex;

namespace {

// semi-analytic oracle: integral of ln|w| over [-h/2,h/2]^2 with the inner
// y-integral in closed form and an adaptive outer integral
double log_cell_integral_oracle(double h) {
  auto inner = [](double x, double y) {
    if (x == 0.0) return y * std::log(y * y) - 2.0 * y;
    return y * std::log(x * x + y * y) - 2.0 * y + 2.0 * x * std::atan(y / x);
  };
  auto f = [&](double x) { return 0.5 * (inner(x, h / 2) - inner(x, -h / 2)); };
  // adaptive Simpson on [-h/2, h/2]
  struct Rec {
    static double go(decltype(f)& fn, double a, double b, double fa, double fm,
                     double fb, double whole, double tol, int depth) {
      double m = (a + b) / 2;
      double fl = fn((a + m) / 2), fr = fn((m + b) / 2);
      double left = (m - a) / 6 * (fa + 4 * fl + fm);
      double right = (b - m) / 6 * (fm + 4 * fr + fb);
      if (depth <= 0 || std::abs(left + right - whole) < 15 * tol) {
        return left + right + (left + right - whole) / 15;
      }
      return go(fn, a, m, fa, fl, fm, left, tol / 2, depth - 1) +
             go(fn, m, b, fm, fr, fb, right, tol / 2, depth - 1);
    }
  };
  double a = -h / 2, b = h / 2;
  double fa = f(a), fb = f(b), fm = f(0.0);
  double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return Rec::go(f, a, b, fa, fm, fb, whole, 1e-13, 30);
}

}  // namespace

TEST_CASE("grid geometry") {
  nvs::Grid g = nvs::make_grid(8.0, 16);
  CHECK(g.spacing == 1.0);
  CHECK(g.nodes.front() == Complex(-7.5, -7.5));
  CHECK(g.nodes.back() == Complex(7.5, 7.5));
  CHECK(g.nodes[g.index(3, 0)] == Complex(-4.5, -7.5));

  nvs::Grid g32 = nvs::make_grid(8.0, 32);
  CHECK(g32.spacing == 0.5);
  CHECK(g32.spacing * g32.points_per_side == 2 * g32.half_width);
}

TEST_CASE("refinement nesting: coarse node is the mean of its 4 children") {
  nvs::Grid coarse = nvs::make_grid(8.0, 16);
  nvs::Grid fine = nvs::make_grid(8.0, 32);
  for (int iy = 0; iy < 16; ++iy) {
    for (int ix = 0; ix < 16; ++ix) {
      Complex sum = fine.nodes[fine.index(2 * ix, 2 * iy)] +
                    fine.nodes[fine.index(2 * ix + 1, 2 * iy)] +
                    fine.nodes[fine.index(2 * ix, 2 * iy + 1)] +
                    fine.nodes[fine.index(2 * ix + 1, 2 * iy + 1)];
      CHECK(std::abs(0.25 * sum - coarse.nodes[coarse.index(ix, iy)]) < 1e-14);
    }
  }
}

TEST_CASE("grid parameter validation") {
  CHECK_THROWS_AS(nvs::make_grid(0.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(nvs::make_grid(8.0, 6), std::invalid_argument);
  CHECK_THROWS_AS(nvs::make_grid(8.0, 17), std::invalid_argument);
}

TEST_CASE("midpoint quadrature") {
  nvs::Grid g = nvs::make_grid(8.0, 32);
  std::vector<Complex> ones(g.size(), Complex(1, 0));
  CHECK(std::abs(nvs::integrate(g, ones) - Complex(256, 0)) < 1e-12);

  // gaussian integrates to pi
  nvs::Grid g64 = nvs::make_grid(8.0, 64);
  std::vector<Complex> gs(g64.size());
  for (int j = 0; j < g64.size(); ++j) {
    gs[j] = std::exp(-std::norm(g64.nodes[j]));
  }
  CHECK(std::abs(nvs::integrate(g64, gs) - Complex(std::numbers::pi, 0)) <
        1e-10);

  // odd in Re z integrates to zero
  std::vector<Complex> odd(g.size());
  for (int j = 0; j < g.size(); ++j) {
    odd[j] = g.nodes[j].real() * std::exp(-std::norm(g.nodes[j]));
  }
  CHECK(std::abs(nvs::integrate(g, odd)) < 1e-14);
}

TEST_CASE("midpoint rule is second order on smooth integrands") {
  // a decaying gaussian converges faster than any power (trapezoid family),
  // so the rate is exhibited on a smooth integrand with boundary mismatch
  const double exact = 4.0 * (std::exp(2.0) - std::exp(-2.0)) * 6.0 *
                       std::sin(8.0 / 3.0);
  auto err = [&](int n) {
    nvs::Grid g = nvs::make_grid(8.0, n);
    std::vector<Complex> v(g.size());
    for (int j = 0; j < g.size(); ++j) {
      v[j] = std::exp(g.nodes[j].real() / 4.0) *
             std::cos(g.nodes[j].imag() / 3.0);
    }
    return std::abs(nvs::integrate(g, v).real() - exact);
  };
  double ratio = err(16) / err(32);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);

  // and the gaussian is already exact to quadrature floor at modest N
  nvs::Grid g = nvs::make_grid(8.0, 32);
  std::vector<Complex> v(g.size());
  for (int j = 0; j < g.size(); ++j) v[j] = std::exp(-std::norm(g.nodes[j]));
  CHECK(std::abs(nvs::integrate(g, v).real() - std::numbers::pi) < 1e-12);
}

TEST_CASE("log_cell_average closed form vs quadrature oracle") {
  for (double h : {1.0, 0.25, 0.03}) {
    double want = log_cell_integral_oracle(h) / (h * h);
    CHECK(nvs::log_cell_average(h) == doctest::Approx(want).epsilon(1e-10));
  }
  // rescaling law and monotone h -> 0 behavior
  CHECK(nvs::log_cell_average(2.0) ==
        doctest::Approx(nvs::log_cell_average(1.0) + std::numbers::ln2)
            .epsilon(1e-15));
  CHECK(nvs::log_cell_average(0.5) < nvs::log_cell_average(1.0));
  CHECK_THROWS_AS(nvs::log_cell_average(0.0), std::invalid_argument);
}
