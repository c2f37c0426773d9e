// Executable certification checks: named residuals against pinned tolerances.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nvs/potential.hpp"
#include "nvs/scattering.hpp"

namespace nvs {

struct VerificationReport {
  std::string check_name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> context;

  static VerificationReport make(std::string name, double residual,
                                 double tolerance);
  void add_context(const std::string& key, const std::string& value);
};

// Tolerance regimes: algebraic identities, quadrature-limited comparisons,
// finite-difference-limited dbar identities.
struct CheckConfig {
  uint64_t seed = 0x5EED;
  double fd_step = 1e-3;
  double tol_algebraic = 1e-12;
  double tol_quadrature = 1e-3;
  double tol_fd = 5e-2;
};

// Exponential-integral properties: conjugation symmetry, d/dz = e^z/z by
// central differences, the decay constant sup |e^{-z}(Ei+Ei~)| |z|, and the
// logarithmic singularity bound near zero.
std::vector<VerificationReport> check_ei_props(const CheckConfig& cfg = {});

// Green-function properties: lambda = 0 exactness, conjugation symmetry,
// the decay constant, large-z boundedness across radii 10/20/40, continuity
// at lambda = 0, and both dbar closed forms against complex finite
// differences.
std::vector<VerificationReport> check_green_props(const CheckConfig& cfg = {});

// Kernel norm limits: ||H(l)-H(0)|| decreasing over lambda_small and ||H(l)||
// decreasing over lambda_large (10% slack).
VerificationReport check_hs_limits(const Potential& v,
                                   const std::vector<Complex>& lambda_small,
                                   const std::vector<Complex>& lambda_large);

// End-to-end translation covariance at one (zeta, lambda): compute-then-shift
// against shift-then-compute for det2 and all nine data components.
// zeta must be an integer multiple of the grid spacing.
std::vector<VerificationReport> check_shift(const Potential& v, Complex zeta,
                                            Complex lambda,
                                            const CheckConfig& cfg = {});

// dbar identity of the determinant: Wirtinger finite difference of det2
// against the closed form built from a1, a2, c1, vhat(0).
VerificationReport check_dbar_det(const Potential& v, Complex lambda,
                                  double fd_step, double tolerance = 3e-2);

// dbar identity of mu_1 at one interior node.
VerificationReport check_dbar_mu(const Potential& v, Complex z, Complex lambda,
                                 double fd_step, double tolerance = 5e-2);

// Same identity at several nodes, sharing the five solves of the finite
// difference stencil.
std::vector<VerificationReport> check_dbar_mu_batch(
    const Potential& v, const std::vector<Complex>& zs, Complex lambda,
    double fd_step, double tolerance = 5e-2);

// Integer-cell translation of the sampled potential (vacated cells are
// zero-filled; the certificate keeps them below 1e-10 max|v|).
Potential shift_potential(const Potential& v, Complex zeta);

// Report CSV: "check_name,residual,tolerance,pass,context" with the context
// serialized as ;-joined key=value pairs.
std::string verification_csv_header();
std::string verification_csv_row(const VerificationReport& r);

}  // namespace nvs
