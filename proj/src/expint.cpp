// Ei on the cut plane: double-double Maclaurin series for small/moderate
// arguments, even-form continued fraction for E1(-z) elsewhere.
#include "nvs/expint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nvs {
namespace {

constexpr double kGammaHi = 0.5772156649015329;
constexpr double kGammaLo = -4.942915152430645e-18;

// Series region: cancellation in the Maclaurin sum is recovered by
// double-double accumulation; outside it the continued fraction converges.
constexpr double kSeriesRadius = 20.0;
constexpr double kWedgeRadius = 48.0;   // near-cut wedge where the CF stalls
constexpr double kWedgeAngle = 0.35;
constexpr int kSeriesMaxTerms = 260;
constexpr int kCfMaxIter = 6000;

// ---- double-double arithmetic (error-free transforms) ----

struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  double e = s.lo + a.lo + b.lo;
  DD r = two_sum(s.hi, e);
  return r;
}

inline DD dd_sub(DD a, DD b) { return dd_add(a, {-b.hi, -b.lo}); }

inline DD dd_mul(DD a, DD b) {
  double p = a.hi * b.hi;
  double e = std::fma(a.hi, b.hi, -p);
  e += a.hi * b.lo + a.lo * b.hi;
  DD r = two_sum(p, e);
  return r;
}

inline DD dd_div_int(DD a, double n) {
  double q1 = a.hi / n;
  double p = q1 * n;
  double e = std::fma(q1, n, -p);
  double r = ((a.hi - p) - e) + a.lo;
  double q2 = r / n;
  DD s = two_sum(q1, q2);
  return s;
}

struct SeriesSums {
  Complex s;   // sum z^n/(n n!)
  double s2;   // sum (z^n + conj(z)^n)/(n n!) = 2 sum Re(z^n)/(n n!)
};

SeriesSums maclaurin_sums(Complex z) {
  DD tr{1.0, 0.0}, ti{0.0, 0.0};  // z^n / n!
  DD sre, sim, s2;
  DD zr{z.real(), 0.0}, zi{z.imag(), 0.0};
  for (int n = 1; n <= kSeriesMaxTerms; ++n) {
    DD nr = dd_sub(dd_mul(tr, zr), dd_mul(ti, zi));
    DD ni = dd_add(dd_mul(tr, zi), dd_mul(ti, zr));
    tr = dd_div_int(nr, n);
    ti = dd_div_int(ni, n);
    DD a = dd_div_int(tr, n);
    DD b = dd_div_int(ti, n);
    sre = dd_add(sre, a);
    sim = dd_add(sim, b);
    s2 = dd_add(s2, dd_add(a, a));
    if (n > 6 && std::abs(tr.hi) + std::abs(ti.hi) <
                     1e-38 * (std::abs(sre.hi) + std::abs(sim.hi) + 1.0)) {
      break;
    }
  }
  return {Complex(sre.hi + sre.lo, sim.hi + sim.lo), s2.hi + s2.lo};
}

bool in_series_region(Complex z) {
  double az = std::abs(z);
  if (az <= kSeriesRadius && z.real() >= -2.0) return true;
  if (az > kSeriesRadius && az <= kWedgeRadius &&
      std::abs(std::arg(z)) <= kWedgeAngle) {
    return true;
  }
  return false;
}

// Modified Lentz on the even contraction of the Stieltjes fraction:
//   E1(w) e^{w} = 1/(w+1 - 1/(w+3 - 4/(w+5 - 9/(...)))).
// Converges for w off the negative real axis; slow only inside the wedge
// excluded above.
Complex e1_cf_scaled(Complex w) {
  constexpr double kTiny = 1e-300;
  Complex b = w + 1.0;
  if (b == 0.0) b = kTiny;
  Complex d = 1.0 / b;
  Complex f = d;
  Complex c = std::numeric_limits<double>::max();
  for (int k = 1; k < kCfMaxIter; ++k) {
    double a = -double(k) * double(k);
    b += 2.0;
    d = b + a * d;
    if (d == 0.0) d = kTiny;
    c = b + a / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 5e-17) break;
  }
  return f;
}

// sum_{k>=0} k!/x^k truncated at the smallest term; for x above the wedge
// radius the truncation error is below 1e-20 relative.
double factorial_asymptotic_sum(double x) {
  double s = 1.0, t = 1.0;
  for (int k = 1; k < static_cast<int>(x); ++k) {
    t *= k / x;
    if (t < 1e-18) break;
    s += t;
  }
  return s;
}

void require_finite(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error("expint: non-finite argument");
  }
}

}  // namespace

double euler_gamma() { return kGammaHi; }

Complex ei(Complex z) {
  require_finite(z);
  if (z == 0.0 || (z.imag() == 0.0 && z.real() > 0.0)) {
    throw std::domain_error("ei: argument on the cut R+ or zero");
  }
  if (in_series_region(z)) {
    SeriesSums s = maclaurin_sums(z);
    Complex l = std::log(-z);
    return {kGammaHi + kGammaLo + l.real() + s.s.real(),
            l.imag() + s.s.imag()};
  }
  return -std::exp(z) * e1_cf_scaled(-z);
}

double ei_sym(Complex z) {
  require_finite(z);
  if (z == 0.0) throw std::domain_error("ei_sym: argument zero");
  if (in_series_region(z)) {
    return 2.0 * kGammaHi + 2.0 * std::log(std::abs(z)) + maclaurin_sums(z).s2;
  }
  if (z.imag() == 0.0 && z.real() > 0.0) {
    double x = z.real();
    return 2.0 * std::exp(x) * factorial_asymptotic_sum(x) / x;
  }
  Complex v = -std::exp(z) * e1_cf_scaled(-z);
  return 2.0 * v.real();
}

Complex ei_sym_scaled(Complex z) {
  require_finite(z);
  if (z == 0.0) throw std::domain_error("ei_sym_scaled: argument zero");
  if (in_series_region(z)) {
    double v = 2.0 * kGammaHi + 2.0 * std::log(std::abs(z)) + maclaurin_sums(z).s2;
    return std::exp(-z) * v;
  }
  if (z.imag() == 0.0 && z.real() > 0.0) {
    double x = z.real();
    return {2.0 * factorial_asymptotic_sum(x) / x, 0.0};
  }
  Complex f = e1_cf_scaled(-z);
  return -f - std::polar(1.0, -2.0 * z.imag()) * std::conj(f);
}

}  // namespace nvs
