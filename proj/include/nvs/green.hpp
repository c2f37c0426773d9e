// Regularized zero-energy Green function g^r(z, lambda) and companions:
//   X(z,l)   = exp(-i l z - i conj(l) conj(z))            (unimodular phase)
//   G(l)     = 1/4 (e^{-il} + e^{i conj(l)}) (Ei(il) + Ei(-i conj(l)))
//   g^r(z,l) = 1/(16 pi) e^{-ilz} (Ei(ilz) + Ei(-i conj(l) conj(z)))
//              - 1/(16 pi) (1 + X) G(l),   g^r(z,0) = 1/(16 pi) ln|z|^2.
#pragma once

#include <complex>

namespace nvs {

using Complex = std::complex<double>;

// Split of g^r near z = 0: g^r(z,l) = log_coeff * ln|z| + remainder + o(1).
struct KernelSplit {
  double log_coeff;              // always 1/(8 pi)
  Complex remainder_at_zero;     // lim_{z->0} [g^r(z,l) - ln|z|/(8 pi)]
};

Complex x_phase(Complex z, Complex lambda);

// G(lambda); real-valued.  Throws std::domain_error at lambda = 0.
double g_cal(Complex lambda);

// d G / d conj(lambda) in Wirtinger sense:
//   1/4 i e^{i conj(l)} (Ei(il) + Ei(-i conj(l)))
//   + 1/4 (e^{-il} + e^{i conj(l)}) e^{-i conj(l)} / conj(l).
Complex g_cal_dbar(Complex lambda);

// g^r(z, lambda).  Throws std::domain_error at z = 0.
Complex green_reg(Complex z, Complex lambda);

// d g^r / d conj(lambda) =
//   X/(16 pi conj(l)) + i conj(z) X G /(16 pi) - (1+X) dG/dconj(l) /(16 pi).
// Throws std::domain_error at z = 0 or lambda = 0.
Complex green_reg_dbar(Complex z, Complex lambda);

KernelSplit log_split(Complex lambda);

}  // namespace nvs
