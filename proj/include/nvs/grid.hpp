// Uniform cell-centered grids on the square [-L,L]^2 and midpoint quadrature.
#pragma once

#include <complex>
#include <vector>

namespace nvs {

using Complex = std::complex<double>;

// Cell centers z = (-L + (ix+1/2) h) + i (-L + (iy+1/2) h), h = 2L/N,
// stored row-major: index = iy*N + ix (rows of increasing Im, then Re).
struct Grid {
  double half_width = 0.0;
  int points_per_side = 0;
  double spacing = 0.0;
  std::vector<Complex> nodes;

  int size() const { return points_per_side * points_per_side; }
  int index(int ix, int iy) const { return iy * points_per_side + ix; }
};

// Complex field sampled on a grid.
struct SampledField {
  Grid grid;
  std::vector<Complex> values;
};

// L > 0, N even and >= 8; throws std::invalid_argument otherwise.
Grid make_grid(double half_width, int points_per_side);

// Midpoint rule: h^2 * sum of values.
Complex integrate(const SampledField& f);
Complex integrate(const Grid& grid, const std::vector<Complex>& values);
double integrate(const Grid& grid, const std::vector<double>& values);

// Mean of ln|w| over the centered square cell of side h:
//   ln(h) + pi/4 - 3/2 - ln(2)/2    (closed form).
double log_cell_average(double h);

}  // namespace nvs
