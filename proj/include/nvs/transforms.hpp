// Algebraic transforms of scattering data: translation by zeta, time
// evolution under the zero-energy flow, and the traveling-wave obstruction
// residuals built from their incompatibility.
#pragma once

#include <vector>

#include "nvs/scattering.hpp"

namespace nvs {

// Translation law for v_zeta(z) = v(z - zeta):
//   a1 -> a1
//   b1 -> p b1,                 p = exp(i l zeta + i conj(l zeta))
//   c1 -> c1 + zeta a1
//   d1 -> p (d1 + conj(zeta) b1)
//   a2 -> a2 + zeta a1
//   b2 -> p (b2 + zeta b1)
//   c2 -> c2 + zeta (a2 + c1) + zeta^2 a1
//   a3 -> a3 + 2 zeta a2 + zeta^2 a1
//   b3 -> p (b3 + 2 zeta b2 + zeta^2 b1)
ScatteringData shift_data(const ScatteringData& s, Complex zeta);

// Time evolution with q = exp(8 i (l^3 + conj(l)^3) t):
//   a1 -> a1
//   b1 -> q b1
//   c1 -> c1 + 24 l^2 a1 t
//   d1 -> q (d1 + 24 conj(l)^2 b1 t)
//   a2 -> a2 + 24 l^2 a1 t
//   c2 -> c2 + 24 l^2 (a2 + c1) t + (24 l^2)^2 a1 t^2
//   a3 -> a3 + 48 l^2 a2 t - 48 i l a1 t + (24 l^2)^2 a1 t^2
// b2, b3 are carried along with the flow q (b2 + 24 l^2 b1 t) and
// q (b3 + 48 l^2 b2 t - 48 i l b1 t + (24 l^2)^2 b1 t^2); these two are
// advisory companions and never enter the obstruction residuals.
ScatteringData evolve_data(const ScatteringData& s0, Complex lambda, double t);

struct ObstructionReport {
  double residual_b = 0.0;     // |(q_nv - q_sol) b1|
  double residual_d = 0.0;     // mismatch of the two d1 predictions
  double residual_a = 0.0;     // |(24 l^2 - c) t a1|
  double residual_aeqc = 0.0;  // |a2 + c1|, gated on residual_a ~ 0
  double residual_final = 0.0; // |a2| + |c1|
  std::vector<Complex> lambda_samples;
  Complex velocity;
  double time = 0.0;
};

// Max-aggregates the per-lambda residuals over the sample records; each
// record supplies the data components at its own lambda.  Requires a
// non-empty sample, t != 0, and all lambda != 0.
ObstructionReport obstruction_residuals(const std::vector<ScatteringData>& samples,
                                        Complex velocity, double t);

// Spec form: a single component set evaluated against every lambda in the
// sample list (synthetic data studies).
ObstructionReport obstruction_residuals(const ScatteringData& s0,
                                        const std::vector<Complex>& lambdas,
                                        Complex velocity, double t);

// Structured text block, one "name=value" line per residual.
std::string obstruction_text(const ObstructionReport& r);

}  // namespace nvs
