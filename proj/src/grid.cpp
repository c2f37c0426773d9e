#include "nvs/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nvs {

Grid make_grid(double half_width, int points_per_side) {
  if (!(half_width > 0.0)) {
    throw std::invalid_argument("make_grid: half width must be positive");
  }
  if (points_per_side < 8 || points_per_side % 2 != 0) {
    throw std::invalid_argument("make_grid: N must be even and >= 8");
  }
  Grid g;
  g.half_width = half_width;
  g.points_per_side = points_per_side;
  g.spacing = 2.0 * half_width / points_per_side;
  g.nodes.resize(static_cast<size_t>(points_per_side) * points_per_side);
  for (int iy = 0; iy < points_per_side; ++iy) {
    double im = -half_width + (iy + 0.5) * g.spacing;
    for (int ix = 0; ix < points_per_side; ++ix) {
      double re = -half_width + (ix + 0.5) * g.spacing;
      g.nodes[g.index(ix, iy)] = Complex(re, im);
    }
  }
  return g;
}

Complex integrate(const Grid& grid, const std::vector<Complex>& values) {
  Complex s = 0.0;
  for (const Complex& v : values) s += v;
  return grid.spacing * grid.spacing * s;
}

double integrate(const Grid& grid, const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return grid.spacing * grid.spacing * s;
}

Complex integrate(const SampledField& f) {
  return integrate(f.grid, f.values);
}

double log_cell_average(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("log_cell_average: h must be > 0");
  constexpr double kUnitCell =
      std::numbers::pi / 4.0 - 1.5 - 0.5 * std::numbers::ln2;
  return std::log(h) + kUnitCell;
}

}  // namespace nvs
