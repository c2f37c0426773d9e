#include "nvs/green.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nvs/expint.hpp"

namespace nvs {
namespace {

constexpr double kInv16Pi = 1.0 / (16.0 * std::numbers::pi);
constexpr double kInv8Pi = 1.0 / (8.0 * std::numbers::pi);
constexpr double kGamma = 0.5772156649015329;

// Series path window: small |lambda z| controls the log cancellation near
// lambda = 0; the |lambda| cap keeps the grouped terms free of exp growth.
constexpr double kSeriesArg = 0.5;
constexpr double kSeriesLambda = 1.0;

inline void require_finite(Complex w, const char* who) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
    throw std::domain_error(std::string(who) + ": non-finite argument");
  }
}

// exp(w) - 1 without cancellation for small w.
inline Complex cexpm1(Complex w) {
  double a = w.real(), b = w.imag();
  double sh = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * sh * sh,
          std::exp(a) * std::sin(b)};
}

// sum (w^n + conj(w)^n)/(n n!) = ei_sym(w) - 2 gamma - 2 ln|w|.
inline double sym_series_tail(Complex w) {
  return ei_sym(w) - 2.0 * kGamma - 2.0 * std::log(std::abs(w));
}

}  // namespace

Complex x_phase(Complex z, Complex lambda) {
  require_finite(z, "x_phase");
  require_finite(lambda, "x_phase");
  // -i l z - i conj(l z) = -2 i Re(l z): purely imaginary exponent.
  return std::polar(1.0, -2.0 * (lambda * z).real());
}

double g_cal(Complex lambda) {
  require_finite(lambda, "g_cal");
  if (lambda == 0.0) throw std::domain_error("g_cal: lambda = 0");
  // 1/4 (e^{-il}+e^{i conj l}) (Ei(il)+Ei(-i conj l))
  //   = 1/2 Re( e^{-il} (Ei(il)+Ei(-i conj l)) ), fused against overflow.
  return 0.5 * ei_sym_scaled(Complex(0.0, 1.0) * lambda).real();
}

Complex g_cal_dbar(Complex lambda) {
  require_finite(lambda, "g_cal_dbar");
  if (lambda == 0.0) throw std::domain_error("g_cal_dbar: lambda = 0");
  Complex il = Complex(0.0, 1.0) * lambda;
  // e^{i conj l} (Ei(il)+Ei(-i conj l)) = conj(e^{-il} (Ei...)), the bracket
  // being real; and (e^{-il}+e^{i conj l}) e^{-i conj l} = e^{-2 i Re l} + 1.
  Complex t1 = 0.25 * Complex(0.0, 1.0) * std::conj(ei_sym_scaled(il));
  Complex t2 = 0.25 * (std::polar(1.0, -2.0 * lambda.real()) + 1.0) /
               std::conj(lambda);
  return t1 + t2;
}

Complex green_reg(Complex z, Complex lambda) {
  require_finite(z, "green_reg");
  require_finite(lambda, "green_reg");
  if (z == 0.0) throw std::domain_error("green_reg: z = 0");
  if (lambda == 0.0) return {kInv8Pi * std::log(std::abs(z)), 0.0};

  Complex X = x_phase(z, lambda);
  Complex ilz = Complex(0.0, 1.0) * lambda * z;

  if (std::abs(lambda * z) <= kSeriesArg && std::abs(lambda) <= kSeriesLambda) {
    // Grouped series form: the 2 gamma + 2 ln|lambda| blocks of both brackets
    // share the factor B = e^{-ilz} - (1+X)(e^{-il}+e^{i conj l})/4, which is
    // O(lambda) and evaluated cancellation-free via expm1.
    double e2 = 2.0 * std::exp(-Complex(0.0, 1.0) * lambda).real();
    Complex B = cexpm1(-ilz) -
                0.25 * (e2 * (X - 1.0) + 2.0 * (e2 - 2.0));
    Complex t0 = B * (2.0 * kGamma + 2.0 * std::log(std::abs(lambda)));
    Complex t1 = std::exp(-ilz) *
                 (2.0 * std::log(std::abs(z)) + sym_series_tail(ilz));
    Complex t2 = -0.25 * (1.0 + X) * e2 *
                 sym_series_tail(Complex(0.0, 1.0) * lambda);
    return kInv16Pi * (t0 + t1 + t2);
  }
  return kInv16Pi * ei_sym_scaled(ilz) - kInv16Pi * (1.0 + X) * g_cal(lambda);
}

Complex green_reg_dbar(Complex z, Complex lambda) {
  require_finite(z, "green_reg_dbar");
  require_finite(lambda, "green_reg_dbar");
  if (z == 0.0) throw std::domain_error("green_reg_dbar: z = 0");
  if (lambda == 0.0) throw std::domain_error("green_reg_dbar: lambda = 0");
  Complex X = x_phase(z, lambda);
  return X * (kInv16Pi / std::conj(lambda)) +
         Complex(0.0, kInv16Pi) * std::conj(z) * X * g_cal(lambda) -
         kInv16Pi * (1.0 + X) * g_cal_dbar(lambda);
}

KernelSplit log_split(Complex lambda) {
  require_finite(lambda, "log_split");
  if (lambda == 0.0) return {kInv8Pi, Complex(0.0, 0.0)};
  // Small-z limit of the series form: the ln|z| part carries 1/(8 pi), and
  // what is left is gamma + ln|lambda| - G(lambda), times 1/(8 pi).
  double rem = kInv8Pi * (kGamma + std::log(std::abs(lambda)) - g_cal(lambda));
  return {kInv8Pi, Complex(rem, 0.0)};
}

}  // namespace nvs
