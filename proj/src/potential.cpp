#include "nvs/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nvs {
namespace {

double eval_spec(const PotentialSpec& spec, Complex z) {
  if (spec.kind == PotentialSpec::Kind::Bump) {
    double r = std::abs(z - spec.bump_center) / spec.bump_radius;
    if (r >= 1.0) return 0.0;
    return spec.bump_amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r));
  }
  double v = 0.0;
  for (const GaussianSpec& g : spec.gaussians) {
    Complex d = z - g.center;
    v += g.amplitude * std::exp(-std::norm(d) / (g.sigma * g.sigma));
  }
  return v;
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

// Fits the smallest decay constant q and checks boundary smallness.
void finalize_certificate(Potential& p) {
  const Grid& grid = p.grid;
  double q = 0.0;
  for (size_t i = 0; i < p.values.size(); ++i) {
    double w = std::pow(1.0 + std::abs(grid.nodes[i]), 4.0 + p.decay_eps);
    q = std::max(q, std::abs(p.values[i]) * w);
  }
  p.decay_q = q;

  const int n = grid.points_per_side;
  double ring = 0.0;
  for (int ix = 0; ix < n; ++ix) {
    ring = std::max(ring, std::abs(p.values[grid.index(ix, 0)]));
    ring = std::max(ring, std::abs(p.values[grid.index(ix, n - 1)]));
  }
  for (int iy = 0; iy < n; ++iy) {
    ring = std::max(ring, std::abs(p.values[grid.index(0, iy)]));
    ring = std::max(ring, std::abs(p.values[grid.index(n - 1, iy)]));
  }
  if (ring > 1e-10 * p.max_abs()) {
    throw CertificateError(
        "potential: boundary ring not negligible (grid too small for '" +
        p.family_tag + "')");
  }
}

}  // namespace

double Potential::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

std::string PotentialSpec::tag() const {
  std::ostringstream os;
  if (kind == Kind::Bump) {
    os << "bump:" << bump_amplitude << "," << bump_radius;
    if (bump_center != Complex(0.0)) {
      os << "," << bump_center.real() << "," << bump_center.imag();
    }
    return os.str();
  }
  bool first = true;
  for (const GaussianSpec& g : gaussians) {
    if (!first) os << "+";
    first = false;
    os << "gaussian:" << g.amplitude << "," << g.sigma;
    if (g.center != Complex(0.0)) {
      os << "," << g.center.real() << "," << g.center.imag();
    }
  }
  return os.str();
}

PotentialSpec PotentialSpec::shifted(Complex zeta) const {
  PotentialSpec s = *this;
  if (s.kind == Kind::Bump) {
    s.bump_center += zeta;
  } else {
    for (GaussianSpec& g : s.gaussians) g.center += zeta;
  }
  return s;
}

PotentialSpec PotentialSpec::gaussian(double a, double sigma, Complex center) {
  PotentialSpec s;
  s.kind = Kind::GaussianSum;
  s.gaussians = {GaussianSpec{a, sigma, center}};
  return s;
}

PotentialSpec PotentialSpec::bump(double a, double radius) {
  PotentialSpec s;
  s.kind = Kind::Bump;
  s.bump_amplitude = a;
  s.bump_radius = radius;
  return s;
}

PotentialSpec PotentialSpec::parse(const std::string& text) {
  PotentialSpec spec;
  spec.gaussians.clear();
  std::stringstream ss(text);
  std::string part;
  bool any = false;
  while (std::getline(ss, part, '+')) {
    auto colon = part.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("potential spec: expected kind:args in '" +
                                  part + "'");
    }
    std::string kind = part.substr(0, colon);
    std::vector<double> args = split_numbers(part.substr(colon + 1));
    if (kind == "gaussian") {
      if (args.size() != 2 && args.size() != 4) {
        throw std::invalid_argument(
            "potential spec: gaussian wants A,sigma[,cre,cim]");
      }
      if (any && spec.kind == Kind::Bump) {
        throw std::invalid_argument("potential spec: bump cannot be summed");
      }
      GaussianSpec g{args[0], args[1],
                     args.size() == 4 ? Complex(args[2], args[3]) : 0.0};
      if (!(g.sigma > 0.0)) {
        throw std::invalid_argument("potential spec: sigma must be positive");
      }
      spec.kind = Kind::GaussianSum;
      spec.gaussians.push_back(g);
    } else if (kind == "bump") {
      if (args.size() != 2 && args.size() != 4) {
        throw std::invalid_argument("potential spec: bump wants A,R[,cre,cim]");
      }
      if (any) {
        throw std::invalid_argument("potential spec: bump cannot be summed");
      }
      spec = PotentialSpec::bump(args[0], args[1]);
      if (args.size() == 4) spec.bump_center = Complex(args[2], args[3]);
      if (!(spec.bump_radius > 0.0)) {
        throw std::invalid_argument("potential spec: bump radius must be > 0");
      }
    } else {
      throw std::invalid_argument("potential spec: unknown kind '" + kind + "'");
    }
    any = true;
  }
  if (!any) throw std::invalid_argument("potential spec: empty");
  return spec;
}

Potential sample_potential(const PotentialSpec& spec, const Grid& grid,
                           double decay_eps) {
  if (!(decay_eps > 0.0)) {
    throw std::invalid_argument("sample_potential: eps must be positive");
  }
  Potential p;
  p.grid = grid;
  p.decay_eps = decay_eps;
  p.family_tag = spec.tag();
  p.values.resize(grid.nodes.size());
  for (size_t i = 0; i < grid.nodes.size(); ++i) {
    double v = eval_spec(spec, grid.nodes[i]);
    if (!std::isfinite(v)) {
      throw std::invalid_argument("sample_potential: non-finite sample");
    }
    p.values[i] = v;
  }
  finalize_certificate(p);
  return p;
}

Potential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_potential: cannot open " + path);
  double half_width = 0.0, eps = 0.0;
  int n = 0;
  std::string line;
  for (int k = 0; k < 3; ++k) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("load_potential: truncated header");
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("load_potential: bad header line '" + line + "'");
    }
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    if (key == "L") half_width = std::stod(val);
    else if (key == "N") n = std::stoi(val);
    else if (key == "eps") eps = std::stod(val);
    else throw std::runtime_error("load_potential: unknown header key " + key);
  }
  Grid grid = make_grid(half_width, n);
  Potential p;
  p.grid = grid;
  p.decay_eps = eps;
  p.family_tag = "file:" + path;
  p.values.resize(grid.nodes.size());
  for (size_t i = 0; i < p.values.size(); ++i) {
    if (!(in >> p.values[i]) || !std::isfinite(p.values[i])) {
      throw std::runtime_error("load_potential: bad or missing sample");
    }
  }
  finalize_certificate(p);
  return p;
}

void save_potential(const Potential& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_potential: cannot open " + path);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v.grid.half_width);
  out << "L=" << buf << "\n";
  out << "N=" << v.grid.points_per_side << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", v.decay_eps);
  out << "eps=" << buf << "\n";
  const int n = v.grid.points_per_side;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      std::snprintf(buf, sizeof(buf), "%.17g", v.values[v.grid.index(ix, iy)]);
      out << buf << (ix + 1 == n ? "\n" : " ");
    }
  }
}

}  // namespace nvs
