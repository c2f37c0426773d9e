// Real sampled potentials with a decay certificate |v| <= q (1+|z|)^{-4-eps}
// and a boundary-smallness truncation certificate.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nvs/grid.hpp"

namespace nvs {

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Potential {
  Grid grid;
  std::vector<double> values;
  double decay_q = 0.0;      // smallest q with |v| <= q (1+|z|)^{-4-eps} on grid
  double decay_eps = 1.0;
  std::string family_tag;

  double weight_exponent() const { return 3.0 + 0.5 * decay_eps; }
  double max_abs() const;
};

struct GaussianSpec {
  double amplitude = 1.0;
  double sigma = 1.0;
  Complex center = 0.0;
};

// Potential descriptors: a sum of Gaussians A exp(-|z-c|^2/sigma^2) or a
// compactly supported bump A exp(1 - 1/(1-(|z|/R)^2)).
struct PotentialSpec {
  enum class Kind { GaussianSum, Bump } kind = Kind::GaussianSum;
  std::vector<GaussianSpec> gaussians = {GaussianSpec{}};
  double bump_amplitude = 1.0;
  double bump_radius = 1.0;
  Complex bump_center = 0.0;
  std::string tag() const;

  // Same family translated by zeta.
  PotentialSpec shifted(Complex zeta) const;

  static PotentialSpec gaussian(double a, double sigma, Complex center = 0.0);
  static PotentialSpec bump(double a, double radius);
  // CLI syntax: "gaussian:A,sigma[,cre,cim]" (repeatable, '+'-joined) or
  // "bump:A,R".
  static PotentialSpec parse(const std::string& text);
};

// Samples the spec on the grid, fits the decay constant q, and verifies the
// boundary ring is below 1e-10 * max|v|; throws CertificateError otherwise.
Potential sample_potential(const PotentialSpec& spec, const Grid& grid,
                           double decay_eps = 1.0);

// Plain-text format: header lines "L=..", "N=..", "eps=..", then N^2
// whitespace-separated reals in row-major node order.
Potential load_potential(const std::string& path);
void save_potential(const Potential& v, const std::string& path);

}  // namespace nvs
