// Complex exponential integral Ei and the symmetric combination Ei(z) + Ei(conj z).
#pragma once

#include <complex>

namespace nvs {

using Complex = std::complex<double>;

// Euler-Mascheroni constant to full double precision.
double euler_gamma();

// Ei(z) = gamma + ln(-z) + sum_{n>=1} z^n/(n*n!), principal log, cut on the
// positive real axis.  Throws std::domain_error for z = 0, z on the cut, or
// non-finite z.  Overflows to inf for Re z > ~709 (value exceeds double range).
Complex ei(Complex z);

// Continuous extension of Ei(z) + Ei(conj z) to the whole punctured plane:
// 2*gamma + 2*ln|z| + sum (z^n + conj(z)^n)/(n*n!).  Real-valued.
// Throws std::domain_error for z = 0 or non-finite z.
double ei_sym(Complex z);

// exp(-z) * (Ei(z) + Ei(conj z)), fused so it never overflows; bounded by
// C/|z| uniformly in direction.  Same domain as ei_sym.
Complex ei_sym_scaled(Complex z);

}  // namespace nvs
