// Weighted Lippmann-Schwinger operator H(lambda), mu solves, and the
// modified Fredholm determinant det2 = prod (1 - nu_i) exp(nu_i).
#pragma once

#include <complex>
#include <vector>

#include "nvs/grid.hpp"
#include "nvs/linalg.hpp"
#include "nvs/potential.hpp"

namespace nvs {

// Discretized kernel, full N^2 x N^2, column-major:
//   entry(j,k) = h^2 (1+|z_j|)^{-s} g^r(z_j - z_k, lambda) v(z_k) (1+|z_k|)^{s}
// for j != k; the diagonal replaces g^r by singular_cell_average(lambda, h).
// `active` lists the columns where |v| >= 1e-18 max|v|; the remaining columns
// are negligible against every tolerance in use and are skipped by the
// factorizations (exactly zero columns contribute eigenvalue 0).
struct KernelMatrix {
  int n = 0;
  std::vector<Complex> entries;   // column-major n x n
  Complex lambda;
  double weight_s = 3.5;
  Grid grid;
  std::vector<int> active;
  std::vector<double> v;          // potential samples (row-major node order)

  Complex entry(int row, int col) const {
    return entries[static_cast<size_t>(col) * n + row];
  }
};

struct Det2Result {
  Complex delta;
  std::vector<Complex> eigenvalues;
  double residual_imag = 0.0;
};

struct MuSolution {
  SampledField mu1, mu2, mu3;
  double condition_estimate = 1.0;
};

struct FlaggedLambda {
  Complex lambda;
  Complex delta;
};

inline constexpr double kSupportRelThreshold = 1e-18;
inline constexpr double kConditionLimit = 1e12;

// Mean of g^r(w, lambda) over the singular cell [-h/2,h/2]^2: the log part
// has the closed-form average log_cell_average(h)/(8 pi); the continuous
// remainder g^r - ln|w|/(8 pi) is integrated by a Gauss rule whose order
// follows |lambda| h.  For |lambda| h -> 0 this reduces to
// log_coeff * log_cell_average(h) + log_split(lambda).remainder_at_zero.
Complex singular_cell_average(Complex lambda, double h);

KernelMatrix assemble(const Potential& v, Complex lambda, const Grid& grid);

// Frobenius norm of the entries = discrete L2(CxC) kernel norm (the h^2
// quadrature factor folded into the entries supplies the h^4 measure).
double hs_norm(const KernelMatrix& k);

// Solves (I - H) m = (1+|z|)^{-s} {1, z, z^2} for all three right-hand sides
// with one factorization and unweights to mu = (1+|z|)^{s} m.  Throws
// NearSingularError when the condition estimate exceeds 1e12.
MuSolution solve_mu_all(const Potential& v, Complex lambda, const Grid& grid);
MuSolution solve_mu_all(const Potential& v, const KernelMatrix& k);
SampledField solve_mu(const Potential& v, Complex lambda, int order,
                      const Grid& grid);

// mu_order at an arbitrary point from the solved interior field by direct
// quadrature of the integral equation (valid where z is not a support node).
Complex evaluate_mu_at(const MuSolution& sol, const Potential& v, Complex lambda,
                       int order, Complex z);

Det2Result fredholm_det2(const KernelMatrix& k);

// det(I - K) exp(Tr K) by LU factorization: identical to the eigenvalue
// product in exact arithmetic, an order of magnitude cheaper; used where many
// determinant values feed finite differences and no spectrum is wanted.
Complex det2_lu(const KernelMatrix& k);

// Flags lambda values with |det2| < tau.  Duplicates are kept.
std::vector<FlaggedLambda> exceptional_scan(const Potential& v,
                                            const std::vector<Complex>& lambdas,
                                            double tau);

}  // namespace nvs
