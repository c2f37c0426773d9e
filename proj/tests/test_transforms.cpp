#include <doctest.h>

#include <cmath>
#include <random>

#include "nvs/transforms.hpp"

using nvs::Complex;
using nvs::ScatteringData;

namespace {

ScatteringData make_data(std::mt19937_64& rng, Complex lambda) {
  std::uniform_real_distribution<double> u(-1, 1);
  auto c = [&]() { return Complex(u(rng), u(rng)); };
  ScatteringData s{};
  s.a1 = c(); s.b1 = c(); s.c1 = c(); s.d1 = c();
  s.a2 = c(); s.b2 = c(); s.c2 = c();
  s.a3 = c(); s.b3 = c();
  s.lambda = lambda;
  return s;
}

double max_component_diff(const ScatteringData& a, const ScatteringData& b) {
  double m = 0.0;
  const Complex pa[] = {a.a1, a.b1, a.c1, a.d1, a.a2, a.b2, a.c2, a.a3, a.b3};
  const Complex pb[] = {b.a1, b.b1, b.c1, b.d1, b.a2, b.b2, b.c2, b.a3, b.b3};
  for (int i = 0; i < 9; ++i) m = std::max(m, std::abs(pa[i] - pb[i]));
  return m;
}

}  // namespace

TEST_CASE("shift by zero is the identity") {
  std::mt19937_64 rng(1);
  ScatteringData s = make_data(rng, Complex(1.3, -0.2));
  CHECK(max_component_diff(nvs::shift_data(s, Complex(0, 0)), s) == 0.0);
}

TEST_CASE("shifts compose as a group") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    ScatteringData s = make_data(rng, Complex(0.8, 0.6));
    Complex z1(0.7, -1.1), z2(-0.4, 0.35);
    ScatteringData two_steps = nvs::shift_data(nvs::shift_data(s, z1), z2);
    ScatteringData one_step = nvs::shift_data(s, z1 + z2);
    CHECK(max_component_diff(two_steps, one_step) <= 1e-12);
  }
}

TEST_CASE("pure a1 data populates the polynomial components") {
  ScatteringData s{};
  s.a1 = Complex(1, 0);
  s.lambda = Complex(2, 0.5);
  ScatteringData r = nvs::shift_data(s, Complex(1, 0));
  CHECK(r.c1 == Complex(1, 0));
  CHECK(r.a2 == Complex(1, 0));
  CHECK(r.c2 == Complex(1, 0));
  CHECK(r.a3 == Complex(1, 0));
  CHECK(r.a1 == Complex(1, 0));
  CHECK(r.b1 == Complex(0, 0));
}

TEST_CASE("shift phase is unimodular: |b1| preserved") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    ScatteringData s = make_data(rng, Complex(1.7, -0.9));
    ScatteringData r = nvs::shift_data(s, Complex(2.5, 1.5));
    CHECK(std::abs(std::abs(r.b1) - std::abs(s.b1)) <= 1e-14);
  }
}

TEST_CASE("evolution at t = 0 is the identity") {
  std::mt19937_64 rng(4);
  ScatteringData s = make_data(rng, Complex(1, 1));
  CHECK(max_component_diff(nvs::evolve_data(s, s.lambda, 0.0), s) == 0.0);
}

TEST_CASE("b1 acquires the cubic phase, a1 is frozen") {
  ScatteringData s{};
  s.b1 = Complex(1, 0);
  s.a1 = Complex(0.3, -0.7);
  s.lambda = Complex(1, 0);
  ScatteringData r = nvs::evolve_data(s, Complex(1, 0), 1.0);
  // lambda^3 + conj(lambda)^3 = 2 at lambda = 1, so the factor is e^{16 i}
  CHECK(std::abs(r.b1 - std::polar(1.0, 16.0)) <= 1e-15);
  CHECK(std::abs(std::abs(r.b1) - 1.0) <= 1e-15);
  CHECK(r.a1 == s.a1);
}

TEST_CASE("evolution is a semigroup in t") {
  std::mt19937_64 rng(5);
  for (Complex lambda : {Complex(1, 0), Complex(0.6, -1.2), Complex(2, 1)}) {
    for (int i = 0; i < 30; ++i) {
      ScatteringData s = make_data(rng, lambda);
      double t1 = 0.37, t2 = -1.21;
      ScatteringData two = nvs::evolve_data(nvs::evolve_data(s, lambda, t1),
                                            lambda, t2);
      ScatteringData one = nvs::evolve_data(s, lambda, t1 + t2);
      CHECK(max_component_diff(two, one) <= 1e-11);
    }
  }
}

TEST_CASE("obstruction: zero data is the only fixed point") {
  ScatteringData zero{};
  zero.lambda = Complex(1, 0);
  nvs::ObstructionReport rep = nvs::obstruction_residuals(
      zero, {Complex(1, 0), Complex(1, 1), Complex(2, -1)}, Complex(4, 0), 1.0);
  CHECK(rep.residual_b == 0.0);
  CHECK(rep.residual_d == 0.0);
  CHECK(rep.residual_a == 0.0);
  CHECK(rep.residual_aeqc == 0.0);
  CHECK(rep.residual_final == 0.0);
}

TEST_CASE("phase mismatch residual at b1 = 1, lambda = 1, c = 0, t = 1") {
  ScatteringData s{};
  s.b1 = Complex(1, 0);
  s.lambda = Complex(1, 0);
  nvs::ObstructionReport rep =
      nvs::obstruction_residuals(s, {Complex(1, 0)}, Complex(0, 0), 1.0);
  // |e^{16 i} - 1| = 2 |sin 8|, by direct evaluation of the two phases
  double want = std::abs(std::polar(1.0, 16.0) - Complex(1, 0));
  CHECK(rep.residual_b == doctest::Approx(want).epsilon(1e-14));
  CHECK(want == doctest::Approx(2.0 * std::abs(std::sin(8.0))).epsilon(1e-14));
}

TEST_CASE("velocity can cancel residual_a at one lambda only") {
  ScatteringData s{};
  s.a1 = Complex(1, 0);
  s.lambda = Complex(1, 0);
  nvs::ObstructionReport at1 =
      nvs::obstruction_residuals(s, {Complex(1, 0)}, Complex(24, 0), 2.3);
  CHECK(at1.residual_a <= 1e-13);
  nvs::ObstructionReport at2 =
      nvs::obstruction_residuals(s, {Complex(2, 0)}, Complex(24, 0), 2.3);
  CHECK(at2.residual_a > 1.0);
  nvs::ObstructionReport both = nvs::obstruction_residuals(
      s, {Complex(1, 0), Complex(2, 0)}, Complex(24, 0), 2.3);
  CHECK(both.residual_a == doctest::Approx(at2.residual_a));
}

TEST_CASE("dichotomy: nonzero data leaves some residual on 3 generic samples") {
  std::mt19937_64 rng(0x5EED);
  const std::vector<Complex> lambdas = {Complex(1, 0), Complex(1, 1),
                                        Complex(2, -1)};
  std::uniform_real_distribution<double> uc(-30, 30);
  for (int i = 0; i < 50; ++i) {
    ScatteringData s = make_data(rng, lambdas[0]);
    Complex c(uc(rng), uc(rng));
    nvs::ObstructionReport rep = nvs::obstruction_residuals(s, lambdas, c, 1.0);
    double total = rep.residual_b + rep.residual_d + rep.residual_a +
                   rep.residual_final;
    CHECK(total > 1e-6);
  }
}

TEST_CASE("input validation") {
  ScatteringData s{};
  s.lambda = Complex(1, 0);
  CHECK_THROWS_AS(nvs::obstruction_residuals(s, {}, Complex(0, 0), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      nvs::obstruction_residuals(s, {Complex(1, 0)}, Complex(0, 0), 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      nvs::obstruction_residuals(s, {Complex(0, 0)}, Complex(0, 0), 1.0),
      std::invalid_argument);
}

TEST_CASE("report text block lists every residual") {
  ScatteringData s{};
  s.b1 = Complex(0.5, 0);
  s.lambda = Complex(1, 0);
  nvs::ObstructionReport rep =
      nvs::obstruction_residuals(s, {Complex(1, 0)}, Complex(1, 0), 1.0);
  std::string text = nvs::obstruction_text(rep);
  for (const char* key : {"residual_b=", "residual_d=", "residual_a=",
                          "residual_aeqc=", "residual_final=", "velocity=",
                          "time=", "lambda_samples="}) {
    CHECK(text.find(key) != std::string::npos);
  }
}
