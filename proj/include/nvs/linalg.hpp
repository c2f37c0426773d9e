// Thin wrappers over LAPACK dense complex routines.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace nvs {

using Complex = std::complex<double>;

class NearSingularError : public std::runtime_error {
 public:
  NearSingularError(const std::string& what, double condition)
      : std::runtime_error(what), condition_estimate(condition) {}
  double condition_estimate;
};

class EigenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense column-major square matrix.
struct ZMatrix {
  int n = 0;
  std::vector<Complex> a;

  ZMatrix() = default;
  explicit ZMatrix(int dim) : n(dim), a(static_cast<size_t>(dim) * dim) {}
  Complex& at(int row, int col) { return a[static_cast<size_t>(col) * n + row]; }
  const Complex& at(int row, int col) const {
    return a[static_cast<size_t>(col) * n + row];
  }
};

// Solves A X = B in place (B holds the solutions on return) and returns the
// 1-norm condition estimate of A.  Throws NearSingularError when the estimate
// exceeds cond_limit, or on exactly singular factorization.
double lu_solve(ZMatrix a, std::vector<Complex>& b, int nrhs,
                double cond_limit = 1e12);

// All eigenvalues of a general complex matrix (zgeev, no vectors).
std::vector<Complex> eigenvalues(ZMatrix a);

// det(A) from an LU factorization, with overflow-safe magnitude tracking.
Complex lu_det(ZMatrix a);

// Caps the BLAS thread pool (used when scan workers parallelize over lambda).
void set_blas_threads(int n);

}  // namespace nvs
