#include "nvs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nvs/green.hpp"

namespace nvs {
namespace {

// Table of g^r(z_j - z_k, lambda) over the (2N-1)^2 lattice of node
// differences; the kernel is a function of the difference only.
struct GreenTable {
  int n = 0;
  std::vector<Complex> g;   // index (dix + n-1) + (diy + n-1)*(2n-1)
  Complex center;           // singular cell value

  Complex at(int dix, int diy) const {
    if (dix == 0 && diy == 0) return center;
    return g[static_cast<size_t>(diy + n - 1) * (2 * n - 1) + (dix + n - 1)];
  }
};

GreenTable build_table(const Grid& grid, Complex lambda) {
  GreenTable t;
  const int n = grid.points_per_side;
  const double h = grid.spacing;
  t.n = n;
  t.g.resize(static_cast<size_t>(2 * n - 1) * (2 * n - 1));
  for (int diy = -(n - 1); diy <= n - 1; ++diy) {
    for (int dix = -(n - 1); dix <= n - 1; ++dix) {
      if (dix == 0 && diy == 0) continue;
      Complex dz(dix * h, diy * h);
      t.g[static_cast<size_t>(diy + n - 1) * (2 * n - 1) + (dix + n - 1)] =
          green_reg(dz, lambda);
    }
  }
  t.center = singular_cell_average(lambda, h);
  return t;
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the
// Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

std::vector<int> active_columns(const Potential& v) {
  std::vector<int> act;
  double cut = kSupportRelThreshold * v.max_abs();
  for (size_t k = 0; k < v.values.size(); ++k) {
    if (std::abs(v.values[k]) >= cut && v.values[k] != 0.0) {
      act.push_back(static_cast<int>(k));
    }
  }
  return act;
}

// (I - H) restricted to the active columns/rows.
ZMatrix active_system(const KernelMatrix& k) {
  const int m = static_cast<int>(k.active.size());
  ZMatrix a(m);
  for (int c = 0; c < m; ++c) {
    const Complex* col = k.entries.data() +
                         static_cast<size_t>(k.active[c]) * k.n;
    for (int r = 0; r < m; ++r) {
      a.at(r, c) = -col[k.active[r]];
    }
    a.at(c, c) += 1.0;
  }
  return a;
}

}  // namespace

Complex singular_cell_average(Complex lambda, double h) {
  KernelSplit split = log_split(lambda);
  double log_part = split.log_coeff * log_cell_average(h);
  if (lambda == 0.0) return {log_part, 0.0};

  // Gauss order tracks the oscillation scale |lambda| h of the remainder.
  int n = 8 + static_cast<int>(std::ceil(2.5 * std::abs(lambda) * h));
  n = std::min(n, 80);
  n += n & 1;  // even order keeps the nodes off the cell center
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  constexpr double kInv8Pi = 1.0 / (8.0 * std::numbers::pi);
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex p(0.5 * h * x[i], 0.5 * h * x[j]);
      acc += w[i] * w[j] *
             (green_reg(p, lambda) - kInv8Pi * std::log(std::abs(p)));
    }
  }
  // quadrature on [-1,1]^2 carries weight sum 4 = cell area / (h/2)^2.
  // The imaginary part of the cell mean is O((|lambda| h)^3); dropping it
  // keeps the assembled operator exactly conjugation-similar, which is what
  // forces the determinant to stay real.
  return {log_part + 0.25 * acc.real(), 0.0};
}

KernelMatrix assemble(const Potential& v, Complex lambda, const Grid& grid) {
  KernelMatrix k;
  const int n = grid.points_per_side;
  const int dim = n * n;
  k.n = dim;
  k.lambda = lambda;
  k.weight_s = v.weight_exponent();
  k.grid = grid;
  k.v = v.values;
  k.active = active_columns(v);
  k.entries.assign(static_cast<size_t>(dim) * dim, Complex(0.0, 0.0));

  GreenTable table = build_table(grid, lambda);
  const double h2 = grid.spacing * grid.spacing;
  std::vector<double> wneg(dim), colfac(dim);
  for (int j = 0; j < dim; ++j) {
    double w = std::pow(1.0 + std::abs(grid.nodes[j]), k.weight_s);
    wneg[j] = 1.0 / w;
    colfac[j] = h2 * v.values[j] * w;
  }
  for (int col = 0; col < dim; ++col) {
    if (colfac[col] == 0.0) continue;
    const int cx = col % n, cy = col / n;
    Complex* out = k.entries.data() + static_cast<size_t>(col) * dim;
    for (int row = 0; row < dim; ++row) {
      const int rx = row % n, ry = row / n;
      out[row] = wneg[row] * table.at(rx - cx, ry - cy) * colfac[col];
    }
  }
  return k;
}

double hs_norm(const KernelMatrix& k) {
  double s = 0.0;
  for (const Complex& e : k.entries) s += std::norm(e);
  return std::sqrt(s);
}

MuSolution solve_mu_all(const Potential& v, Complex lambda, const Grid& grid) {
  return solve_mu_all(v, assemble(v, lambda, grid));
}

MuSolution solve_mu_all(const Potential& v, const KernelMatrix& k) {
  const Grid& grid = k.grid;
  const int dim = k.n;
  const int m = static_cast<int>(k.active.size());

  std::vector<double> wneg(dim);
  for (int j = 0; j < dim; ++j) {
    wneg[j] = std::pow(1.0 + std::abs(grid.nodes[j]), -k.weight_s);
  }
  auto rhs_of = [&](int order, int j) -> Complex {
    Complex z = grid.nodes[j];
    Complex p = (order == 1) ? Complex(1.0) : (order == 2 ? z : z * z);
    return wneg[j] * p;
  };

  MuSolution sol;
  sol.mu1 = {grid, std::vector<Complex>(dim)};
  sol.mu2 = {grid, std::vector<Complex>(dim)};
  sol.mu3 = {grid, std::vector<Complex>(dim)};

  std::vector<Complex> m_act(static_cast<size_t>(m) * 3);
  if (m > 0) {
    ZMatrix a = active_system(k);
    for (int ord = 0; ord < 3; ++ord) {
      for (int r = 0; r < m; ++r) {
        m_act[static_cast<size_t>(ord) * m + r] = rhs_of(ord + 1, k.active[r]);
      }
    }
    sol.condition_estimate = lu_solve(std::move(a), m_act, 3, kConditionLimit);
  }

  // Off-support rows follow from the solved support values by one relaxation
  // of the discrete equation (their columns are zero, so this is exact).
  SampledField* fields[3] = {&sol.mu1, &sol.mu2, &sol.mu3};
  for (int ord = 0; ord < 3; ++ord) {
    std::vector<Complex>& mu = fields[ord]->values;
    const Complex* ma = m_act.data() + static_cast<size_t>(ord) * m;
    for (int j = 0; j < dim; ++j) mu[j] = rhs_of(ord + 1, j);
    for (int c = 0; c < m; ++c) {
      const Complex* col = k.entries.data() +
                           static_cast<size_t>(k.active[c]) * dim;
      const Complex mc = ma[c];
      for (int j = 0; j < dim; ++j) mu[j] += col[j] * mc;
    }
    for (int r = 0; r < m; ++r) mu[k.active[r]] = ma[r];
    for (int j = 0; j < dim; ++j) mu[j] /= wneg[j];
  }
  return sol;
}

SampledField solve_mu(const Potential& v, Complex lambda, int order,
                      const Grid& grid) {
  if (order < 1 || order > 3) {
    throw std::invalid_argument("solve_mu: order must be 1, 2 or 3");
  }
  MuSolution sol = solve_mu_all(v, lambda, grid);
  if (order == 1) return sol.mu1;
  if (order == 2) return sol.mu2;
  return sol.mu3;
}

Complex evaluate_mu_at(const MuSolution& sol, const Potential& v, Complex lambda,
                       int order, Complex z) {
  const Grid& grid = sol.mu1.grid;
  const SampledField& mu =
      (order == 1) ? sol.mu1 : (order == 2 ? sol.mu2 : sol.mu3);
  Complex acc = (order == 1) ? Complex(1.0) : (order == 2 ? z : z * z);
  const double h2 = grid.spacing * grid.spacing;
  double cut = kSupportRelThreshold * v.max_abs();
  for (size_t k = 0; k < grid.nodes.size(); ++k) {
    if (std::abs(v.values[k]) < cut || v.values[k] == 0.0) continue;
    Complex d = z - grid.nodes[k];
    if (std::abs(d) < 0.25 * grid.spacing) {
      throw std::invalid_argument(
          "evaluate_mu_at: z coincides with a support node");
    }
    acc += h2 * green_reg(d, lambda) * v.values[k] * mu.values[k];
  }
  return acc;
}

Det2Result fredholm_det2(const KernelMatrix& k) {
  Det2Result res;
  const int m = static_cast<int>(k.active.size());
  if (m == 0) {
    res.delta = 1.0;
    return res;
  }
  ZMatrix a(m);
  for (int c = 0; c < m; ++c) {
    const Complex* col = k.entries.data() + static_cast<size_t>(k.active[c]) * k.n;
    for (int r = 0; r < m; ++r) a.at(r, c) = col[k.active[r]];
  }
  res.eigenvalues = eigenvalues(std::move(a));
  Complex prod = 1.0;
  for (const Complex& nu : res.eigenvalues) {
    prod *= (1.0 - nu) * std::exp(nu);
  }
  res.delta = prod;
  res.residual_imag = std::abs(prod.imag());
  return res;
}

Complex det2_lu(const KernelMatrix& k) {
  const int m = static_cast<int>(k.active.size());
  if (m == 0) return {1.0, 0.0};
  ZMatrix a(m);
  Complex trace = 0.0;
  for (int c = 0; c < m; ++c) {
    const Complex* col = k.entries.data() + static_cast<size_t>(k.active[c]) * k.n;
    for (int r = 0; r < m; ++r) a.at(r, c) = -col[k.active[r]];
    a.at(c, c) += 1.0;
    trace += col[k.active[c]];
  }
  Complex det = lu_det(std::move(a));
  return det * std::exp(trace);
}

std::vector<FlaggedLambda> exceptional_scan(const Potential& v,
                                            const std::vector<Complex>& lambdas,
                                            double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("exceptional_scan: tau > 0");
  std::vector<FlaggedLambda> flagged;
  for (Complex lambda : lambdas) {
    Det2Result d = fredholm_det2(assemble(v, lambda, v.grid));
    if (std::abs(d.delta) < tau) flagged.push_back({lambda, d.delta});
  }
  return flagged;
}

}  // namespace nvs
