#include "nvs/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "nvs/format.hpp"

namespace nvs {
namespace {

// exp(i l zeta + i conj(l zeta)) = exp(2 i Re(l zeta)); unit modulus.
Complex shift_phase(Complex lambda, Complex zeta) {
  return std::polar(1.0, 2.0 * (lambda * zeta).real());
}

// exp(8 i (l^3 + conj(l)^3) t) = exp(16 i Re(l^3) t); unit modulus.
Complex evolution_phase(Complex lambda, double t) {
  Complex l3 = lambda * lambda * lambda;
  return std::polar(1.0, 16.0 * l3.real() * t);
}

}  // namespace

ScatteringData shift_data(const ScatteringData& s, Complex zeta) {
  Complex p = shift_phase(s.lambda, zeta);
  ScatteringData r = s;
  r.a1 = s.a1;
  r.b1 = p * s.b1;
  r.c1 = s.c1 + zeta * s.a1;
  r.d1 = p * (s.d1 + std::conj(zeta) * s.b1);
  r.a2 = s.a2 + zeta * s.a1;
  r.b2 = p * (s.b2 + zeta * s.b1);
  r.c2 = s.c2 + zeta * (s.a2 + s.c1) + zeta * zeta * s.a1;
  r.a3 = s.a3 + 2.0 * zeta * s.a2 + zeta * zeta * s.a1;
  r.b3 = p * (s.b3 + 2.0 * zeta * s.b2 + zeta * zeta * s.b1);
  return r;
}

ScatteringData evolve_data(const ScatteringData& s0, Complex lambda, double t) {
  Complex q = evolution_phase(lambda, t);
  Complex l2 = lambda * lambda;
  Complex c24 = 24.0 * l2;
  ScatteringData r = s0;
  r.a1 = s0.a1;
  r.b1 = q * s0.b1;
  r.c1 = s0.c1 + c24 * s0.a1 * t;
  r.d1 = q * (s0.d1 + 24.0 * std::conj(l2) * s0.b1 * t);
  r.a2 = s0.a2 + c24 * s0.a1 * t;
  r.c2 = s0.c2 + c24 * (s0.a2 + s0.c1) * t + c24 * c24 * s0.a1 * t * t;
  r.a3 = s0.a3 + 48.0 * l2 * s0.a2 * t -
         Complex(0.0, 48.0) * lambda * s0.a1 * t + c24 * c24 * s0.a1 * t * t;
  // advisory companions (see header)
  r.b2 = q * (s0.b2 + c24 * s0.b1 * t);
  r.b3 = q * (s0.b3 + 48.0 * l2 * s0.b2 * t -
              Complex(0.0, 48.0) * lambda * s0.b1 * t +
              c24 * c24 * s0.b1 * t * t);
  return r;
}

ObstructionReport obstruction_residuals(
    const std::vector<ScatteringData>& samples, Complex velocity, double t) {
  if (samples.empty()) {
    throw std::invalid_argument("obstruction_residuals: empty lambda sample");
  }
  if (t == 0.0) {
    throw std::invalid_argument("obstruction_residuals: t must be nonzero");
  }
  ObstructionReport rep;
  rep.velocity = velocity;
  rep.time = t;
  double scale = 0.0;
  for (const ScatteringData& s : samples) {
    for (Complex c : {s.a1, s.b1, s.c1, s.d1, s.a2, s.c2, s.a3}) {
      scale = std::max(scale, std::abs(c));
    }
  }
  const double gate = 1e-8 * (1.0 + scale) * std::abs(t);
  for (const ScatteringData& s : samples) {
    Complex lambda = s.lambda;
    if (lambda == 0.0) {
      throw std::invalid_argument("obstruction_residuals: lambda = 0 sample");
    }
    rep.lambda_samples.push_back(lambda);
    Complex q_nv = evolution_phase(lambda, t);
    Complex q_sol = shift_phase(lambda, velocity * t);
    Complex zeta_bar = std::conj(velocity) * t;

    double rb = std::abs((q_nv - q_sol) * s.b1);
    double rd = std::abs(q_nv * (s.d1 + 24.0 * std::conj(lambda * lambda) * s.b1 * t) -
                         q_sol * (s.d1 + zeta_bar * s.b1));
    double ra = std::abs((24.0 * lambda * lambda - velocity) * t * s.a1);
    double raeqc = (ra <= gate) ? std::abs(s.a2 + s.c1) : 0.0;
    double rf = std::abs(s.a2) + std::abs(s.c1);

    rep.residual_b = std::max(rep.residual_b, rb);
    rep.residual_d = std::max(rep.residual_d, rd);
    rep.residual_a = std::max(rep.residual_a, ra);
    rep.residual_aeqc = std::max(rep.residual_aeqc, raeqc);
    rep.residual_final = std::max(rep.residual_final, rf);
  }
  return rep;
}

ObstructionReport obstruction_residuals(const ScatteringData& s0,
                                        const std::vector<Complex>& lambdas,
                                        Complex velocity, double t) {
  std::vector<ScatteringData> samples;
  samples.reserve(lambdas.size());
  for (Complex lambda : lambdas) {
    ScatteringData s = s0;
    s.lambda = lambda;
    samples.push_back(s);
  }
  return obstruction_residuals(samples, velocity, t);
}

std::string obstruction_text(const ObstructionReport& r) {
  std::string out;
  out += "residual_b=" + fmt17(r.residual_b) + "\n";
  out += "residual_d=" + fmt17(r.residual_d) + "\n";
  out += "residual_a=" + fmt17(r.residual_a) + "\n";
  out += "residual_aeqc=" + fmt17(r.residual_aeqc) + "\n";
  out += "residual_final=" + fmt17(r.residual_final) + "\n";
  out += "velocity=" + fmt17(r.velocity) + "\n";
  out += "time=" + fmt17(r.time) + "\n";
  std::string ls;
  for (size_t i = 0; i < r.lambda_samples.size(); ++i) {
    if (i) ls += ";";
    ls += fmt17(r.lambda_samples[i]);
  }
  out += "lambda_samples=" + ls + "\n";
  return out;
}

}  // namespace nvs
