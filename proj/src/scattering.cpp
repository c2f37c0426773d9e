#include "nvs/scattering.hpp"

#include <cmath>

#include "nvs/format.hpp"
#include "nvs/green.hpp"

namespace nvs {

ScatteringData scattering_data(const Potential& v, Complex lambda,
                               const MuSolution& sol) {
  const Grid& grid = v.grid;
  const double h2 = grid.spacing * grid.spacing;
  ScatteringData s{};
  s.lambda = lambda;
  s.potential_tag = v.family_tag;
  for (size_t j = 0; j < grid.nodes.size(); ++j) {
    double vj = v.values[j];
    if (vj == 0.0) continue;
    Complex z = grid.nodes[j];
    Complex px = std::conj(x_phase(z, lambda));  // e^{i l z + i conj(l z)}
    Complex m1 = vj * sol.mu1.values[j];
    Complex m2 = vj * sol.mu2.values[j];
    Complex m3 = vj * sol.mu3.values[j];
    s.a1 += m1;
    s.b1 += px * m1;
    s.c1 += z * m1;
    s.d1 += std::conj(z) * px * m1;
    s.a2 += m2;
    s.b2 += px * m2;
    s.c2 += z * m2;
    s.a3 += m3;
    s.b3 += px * m3;
  }
  s.a1 *= h2; s.b1 *= h2; s.c1 *= h2; s.d1 *= h2;
  s.a2 *= h2; s.b2 *= h2; s.c2 *= h2;
  s.a3 *= h2; s.b3 *= h2;
  return s;
}

ScatteringData scattering_data(const Potential& v, Complex lambda) {
  MuSolution sol = solve_mu_all(v, lambda, v.grid);
  return scattering_data(v, lambda, sol);
}

double vhat0(const Potential& v) {
  return integrate(v.grid, v.values);
}

std::string scattering_csv_header() {
  return "lambda_re,lambda_im,a1_re,a1_im,b1_re,b1_im,c1_re,c1_im,d1_re,d1_im,"
         "a2_re,a2_im,b2_re,b2_im,c2_re,c2_im,a3_re,a3_im,b3_re,b3_im";
}

std::string scattering_csv_row(const ScatteringData& s) {
  std::string row = fmt17(s.lambda.real()) + "," + fmt17(s.lambda.imag());
  for (Complex c : {s.a1, s.b1, s.c1, s.d1, s.a2, s.b2, s.c2, s.a3, s.b3}) {
    row += "," + fmt17(c.real()) + "," + fmt17(c.imag());
  }
  return row;
}

}  // namespace nvs
