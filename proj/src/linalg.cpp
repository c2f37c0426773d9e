#include "nvs/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace nvs {

double lu_solve(ZMatrix a, std::vector<Complex>& b, int nrhs,
                double cond_limit) {
  const int n = a.n;
  if (n == 0) return 1.0;
  if (b.size() != static_cast<size_t>(n) * nrhs) {
    throw std::invalid_argument("lu_solve: rhs size mismatch");
  }
  double anorm = LAPACKE_zlange(LAPACK_COL_MAJOR, '1', n, n, a.a.data(), n);
  std::vector<lapack_int> ipiv(n);
  lapack_int info =
      LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, a.a.data(), n, ipiv.data());
  if (info > 0) {
    throw NearSingularError("lu_solve: exactly singular factor U(" +
                                std::to_string(info) + "," +
                                std::to_string(info) + ") = 0",
                            std::numeric_limits<double>::infinity());
  }
  if (info < 0) throw std::runtime_error("lu_solve: zgetrf bad argument");

  double rcond = 0.0;
  info = LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, a.a.data(), n, anorm, &rcond);
  if (info != 0) throw std::runtime_error("lu_solve: zgecon failed");
  double cond = (rcond > 0.0) ? 1.0 / rcond
                              : std::numeric_limits<double>::infinity();
  if (cond > cond_limit) {
    throw NearSingularError(
        "lu_solve: condition estimate " + std::to_string(cond) +
            " exceeds limit (lambda near the exceptional set?)",
        cond);
  }
  info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, nrhs, a.a.data(), n,
                        ipiv.data(), b.data(), n);
  if (info != 0) throw std::runtime_error("lu_solve: zgetrs failed");
  return cond;
}

std::vector<Complex> eigenvalues(ZMatrix a) {
  const int n = a.n;
  std::vector<Complex> w(n);
  if (n == 0) return w;
  lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.a.data(), n, w.data(),
                    nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw EigenError("eigenvalues: zgeev failed with info " +
                     std::to_string(info));
  }
  return w;
}

Complex lu_det(ZMatrix a) {
  const int n = a.n;
  if (n == 0) return {1.0, 0.0};
  std::vector<lapack_int> ipiv(n);
  lapack_int info =
      LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, a.a.data(), n, ipiv.data());
  if (info < 0) throw std::runtime_error("lu_det: zgetrf bad argument");
  if (info > 0) return {0.0, 0.0};  // exactly singular
  double logmag = 0.0;
  Complex phase = 1.0;
  for (int i = 0; i < n; ++i) {
    Complex u = a.at(i, i);
    logmag += std::log(std::abs(u));
    phase *= u / std::abs(u);
    if (ipiv[i] != i + 1) phase = -phase;
  }
  return phase * std::exp(logmag);
}

void set_blas_threads(int n) { openblas_set_num_threads(n); }

}  // namespace nvs
