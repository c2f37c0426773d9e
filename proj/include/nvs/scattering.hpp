// Scattering functionals: weighted integrals of v mu_j against 1, the
// conjugate phase exp(i l z + i conj(l) conj(z)), z, and conj(z) * phase.
#pragma once

#include <complex>
#include <string>

#include "nvs/potential.hpp"
#include "nvs/solver.hpp"

namespace nvs {

struct ScatteringData {
  Complex a1, b1, c1, d1;
  Complex a2, b2, c2;
  Complex a3, b3;
  Complex lambda;
  std::string potential_tag;
};

// Three mu solves (one factorization) and the nine functionals.
// Propagates NearSingularError for lambda near the exceptional set.
ScatteringData scattering_data(const Potential& v, Complex lambda);

// Same, reusing an existing solution.
ScatteringData scattering_data(const Potential& v, Complex lambda,
                               const MuSolution& sol);

// hat v(0) = integral of v.
double vhat0(const Potential& v);

// CSV row in the record format (17 significant digits):
//   lambda_re,lambda_im,a1_re,a1_im,...,b3_re,b3_im
std::string scattering_csv_header();
std::string scattering_csv_row(const ScatteringData& s);

}  // namespace nvs
