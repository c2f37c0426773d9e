// nvscatter: batch front-end for the zero-energy scattering toolkit.
//
// Exit codes: 0 success, 1 domain/validation error, 2 numerical failure
// (near-singular solve or eigen failure), 3 verification-suite failure.
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "nvs/expint.hpp"
#include "nvs/format.hpp"
#include "nvs/green.hpp"
#include "nvs/linalg.hpp"
#include "nvs/potential.hpp"
#include "nvs/scattering.hpp"
#include "nvs/solver.hpp"
#include "nvs/transforms.hpp"
#include "nvs/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nvs::Complex;

struct CommonOpts {
  std::string grid = "8,32";
  std::string potential = "gaussian:1,1";
  double eps = 1.0;
  std::string out;
  uint64_t seed = 0x5EED;
  int threads = 0;  // 0: machine parallelism
};

void add_common(CLI::App* cmd, CommonOpts& o, const std::string& default_out) {
  o.out = default_out;
  cmd->add_option("--grid", o.grid, "grid as L,N (half width, points per side)");
  cmd->add_option("--potential", o.potential,
                  "potential spec, e.g. gaussian:1,1 or bump:1,4 or file:PATH");
  cmd->add_option("--eps", o.eps, "decay exponent epsilon (weight s = 3+eps/2)");
  cmd->add_option("--out", o.out, "output file");
  cmd->add_option("--seed", o.seed, "RNG seed for sampled checks");
  cmd->add_option("--threads", o.threads, "worker threads for lambda scans");
  cmd->set_config("--config", "", "config file with key = value lines");
}

Complex parse_complex(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) return Complex(std::stod(s), 0.0);
  return Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

std::vector<Complex> parse_complex_list(const std::string& s) {
  std::vector<Complex> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (!item.empty()) out.push_back(parse_complex(item));
  }
  return out;
}

std::pair<double, int> parse_grid(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("grid: expected L,N");
  }
  return {std::stod(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

// lambda rectangle re0,re1,im0,im1,step -> row-major list (re varies fastest)
std::vector<Complex> lambda_rect(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 5 || !(v[4] > 0.0)) {
    throw std::invalid_argument("lambda-rect: expected re0,re1,im0,im1,step");
  }
  std::vector<Complex> out;
  for (double im = v[2]; im <= v[3] + 1e-12 * v[4]; im += v[4]) {
    for (double re = v[0]; re <= v[1] + 1e-12 * v[4]; re += v[4]) {
      out.emplace_back(re, im);
    }
  }
  return out;
}

std::string resolve_out(const std::string& path) {
  const char* dir = std::getenv("NV_SCATTER_OUT");
  if (dir == nullptr || path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

struct Echo {
  std::vector<std::pair<std::string, std::string>> items;
  void add(const std::string& k, const std::string& v) {
    items.emplace_back(k, v);
  }
  void write(std::ostream& os) const {
    os << "# version = " << kVersion << "\n";
    for (const auto& kv : items) {
      os << "# " << kv.first << " = " << kv.second << "\n";
    }
  }
};

Echo common_echo(const std::string& cmd, const CommonOpts& o) {
  Echo e;
  e.add("command", cmd);
  e.add("grid", o.grid);
  e.add("potential", o.potential);
  e.add("eps", nvs::fmt17(o.eps));
  e.add("seed", std::to_string(o.seed));
  e.add("threads", std::to_string(o.threads));
  return e;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

nvs::Potential make_potential(const CommonOpts& o, const nvs::Grid& grid) {
  if (o.potential.rfind("file:", 0) == 0) {
    return nvs::load_potential(o.potential.substr(5));
  }
  return nvs::sample_potential(nvs::PotentialSpec::parse(o.potential), grid,
                               o.eps);
}

// Deterministic-order lambda scan over a worker pool.
template <typename Work>
void run_pool(int threads, int jobs, Work&& work) {
  int n = threads > 0 ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (n == 1 || jobs <= 1) {
    for (int i = 0; i < jobs; ++i) work(i);
    return;
  }
  nvs::set_blas_threads(1);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) {
        work(i);
      }
    });
  }
  for (auto& th : pool) th.join();
  nvs::set_blas_threads(
      static_cast<int>(std::thread::hardware_concurrency()));
}

int cmd_ei(const CommonOpts& o, const std::string& points) {
  auto zs = parse_complex_list(points);
  if (zs.empty()) throw std::invalid_argument("ei: --points is empty");
  Echo e = common_echo("ei", o);
  e.add("points", points);
  auto out = open_out(resolve_out(o.out));
  e.write(out);
  out << "z_re,z_im,ei_re,ei_im,ei_sym\n";
  for (Complex z : zs) {
    Complex v = nvs::ei(z);
    double s = nvs::ei_sym(z);
    out << nvs::fmt17(z) << "," << nvs::fmt17(v) << "," << nvs::fmt17(s)
        << "\n";
  }
  return 0;
}

int cmd_green(const CommonOpts& o, const std::string& points,
              const std::string& lambda_s) {
  auto zs = parse_complex_list(points);
  if (zs.empty()) throw std::invalid_argument("green: --points is empty");
  Complex lambda = parse_complex(lambda_s);
  Echo e = common_echo("green", o);
  e.add("points", points);
  e.add("lambda", lambda_s);
  auto out = open_out(resolve_out(o.out));
  e.write(out);
  out << "z_re,z_im,g_re,g_im,gdbar_re,gdbar_im,x_re,x_im,gcal\n";
  for (Complex z : zs) {
    Complex g = nvs::green_reg(z, lambda);
    Complex gd = lambda == 0.0 ? Complex(0.0, 0.0)
                               : nvs::green_reg_dbar(z, lambda);
    Complex x = nvs::x_phase(z, lambda);
    double gc = lambda == 0.0 ? 0.0 : nvs::g_cal(lambda);
    out << nvs::fmt17(z) << "," << nvs::fmt17(g) << "," << nvs::fmt17(gd)
        << "," << nvs::fmt17(x) << "," << nvs::fmt17(gc) << "\n";
  }
  return 0;
}

int cmd_solve_mu(const CommonOpts& o, const std::string& lambda_s, int order) {
  auto [half, n] = parse_grid(o.grid);
  nvs::Grid grid = nvs::make_grid(half, n);
  nvs::Potential v = make_potential(o, grid);
  Complex lambda = parse_complex(lambda_s);
  nvs::MuSolution sol = nvs::solve_mu_all(v, lambda, grid);
  const nvs::SampledField& mu =
      order == 1 ? sol.mu1 : (order == 2 ? sol.mu2 : sol.mu3);

  Echo e = common_echo("solve-mu", o);
  e.add("lambda", lambda_s);
  e.add("order", std::to_string(order));
  auto out = open_out(resolve_out(o.out));
  e.write(out);
  out << "# condest = " << nvs::fmt17(sol.condition_estimate) << "\n";
  out << "z_re,z_im,mu_re,mu_im\n";
  for (size_t j = 0; j < grid.nodes.size(); ++j) {
    out << nvs::fmt17(grid.nodes[j]) << "," << nvs::fmt17(mu.values[j]) << "\n";
  }
  return 0;
}

std::vector<Complex> scan_lambdas(const std::string& rect,
                                  const std::string& list) {
  if (!rect.empty() && !list.empty()) {
    throw std::invalid_argument("give either --lambda-rect or --lambdas");
  }
  if (!rect.empty()) return lambda_rect(rect);
  auto ls = parse_complex_list(list);
  if (ls.empty()) throw std::invalid_argument("no lambda values given");
  return ls;
}

int cmd_det_scan(const CommonOpts& o, const std::string& rect,
                 const std::string& list, double tau) {
  auto [half, n] = parse_grid(o.grid);
  nvs::Grid grid = nvs::make_grid(half, n);
  nvs::Potential v = make_potential(o, grid);
  std::vector<Complex> lambdas = scan_lambdas(rect, list);

  struct Row {
    Complex lambda, delta;
    double hs = 0.0, condest = 0.0;
    std::string error;
  };
  std::vector<Row> rows(lambdas.size());
  run_pool(o.threads, static_cast<int>(lambdas.size()), [&](int i) {
    Row& r = rows[i];
    r.lambda = lambdas[i];
    try {
      nvs::KernelMatrix k = nvs::assemble(v, r.lambda, grid);
      r.hs = nvs::hs_norm(k);
      r.delta = nvs::fredholm_det2(k).delta;
      nvs::MuSolution sol = nvs::solve_mu_all(v, r.lambda, grid);
      r.condest = sol.condition_estimate;
    } catch (const nvs::NearSingularError& ex) {
      r.condest = ex.condition_estimate;
      r.error = ex.what();
    } catch (const nvs::EigenError& ex) {
      r.error = ex.what();
    }
  });

  Echo e = common_echo("det-scan", o);
  if (!rect.empty()) e.add("lambda-rect", rect);
  if (!list.empty()) e.add("lambdas", list);
  e.add("tau", nvs::fmt17(tau));
  auto out = open_out(resolve_out(o.out));
  e.write(out);
  out << "lambda_re,lambda_im,delta_re,delta_im,hs_norm,condest\n";
  int failures = 0;
  for (const Row& r : rows) {
    if (!r.error.empty()) {
      out << "# failed lambda " << nvs::fmt17(r.lambda) << ": " << r.error
          << "\n";
      ++failures;
      continue;
    }
    out << nvs::fmt17(r.lambda) << "," << nvs::fmt17(r.delta) << ","
        << nvs::fmt17(r.hs) << "," << nvs::fmt17(r.condest) << "\n";
    if (std::abs(r.delta) < tau) {
      out << "# flagged lambda " << nvs::fmt17(r.lambda)
          << " |delta| = " << nvs::fmt17(std::abs(r.delta)) << " < tau\n";
    }
  }
  return failures == 0 ? 0 : 2;
}

int cmd_scatter(const CommonOpts& o, const std::string& rect,
                const std::string& list, double tau) {
  auto [half, n] = parse_grid(o.grid);
  nvs::Grid grid = nvs::make_grid(half, n);
  nvs::Potential v = make_potential(o, grid);
  std::vector<Complex> lambdas = scan_lambdas(rect, list);

  struct Row {
    nvs::ScatteringData s;
    std::string error;
    bool flagged = false;
  };
  std::vector<Row> rows(lambdas.size());
  run_pool(o.threads, static_cast<int>(lambdas.size()), [&](int i) {
    Row& r = rows[i];
    try {
      nvs::KernelMatrix k = nvs::assemble(v, lambdas[i], grid);
      Complex delta = nvs::fredholm_det2(k).delta;
      if (std::abs(delta) < tau) {
        r.flagged = true;
        return;
      }
      r.s = nvs::scattering_data(v, lambdas[i]);
    } catch (const nvs::NearSingularError& ex) {
      r.error = ex.what();
    } catch (const nvs::EigenError& ex) {
      r.error = ex.what();
    }
  });

  Echo e = common_echo("scatter", o);
  if (!rect.empty()) e.add("lambda-rect", rect);
  if (!list.empty()) e.add("lambdas", list);
  e.add("tau", nvs::fmt17(tau));
  auto out = open_out(resolve_out(o.out));
  e.write(out);
  out << nvs::scattering_csv_header() << "\n";
  int failures = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].flagged) {
      out << "# skipped lambda " << nvs::fmt17(lambdas[i])
          << ": |delta| < tau (exceptional)\n";
      continue;
    }
    if (!rows[i].error.empty()) {
      out << "# failed lambda " << nvs::fmt17(lambdas[i]) << ": "
          << rows[i].error << "\n";
      ++failures;
      continue;
    }
    out << nvs::scattering_csv_row(rows[i].s) << "\n";
  }
  return failures == 0 ? 0 : 2;
}

int cmd_verify(const CommonOpts& o, const std::string& suite,
               const std::string& lambda_s, const std::string& zeta_s,
               double fd_step) {
  auto [half, n] = parse_grid(o.grid);
  nvs::Grid grid = nvs::make_grid(half, n);
  nvs::CheckConfig cfg;
  cfg.seed = o.seed;
  cfg.fd_step = fd_step;

  std::vector<nvs::VerificationReport> reports;
  auto append = [&reports](std::vector<nvs::VerificationReport> rs) {
    for (auto& r : rs) reports.push_back(std::move(r));
  };

  if (suite == "all" || suite == "ei") append(nvs::check_ei_props(cfg));
  if (suite == "all" || suite == "green") append(nvs::check_green_props(cfg));
  if (suite == "all" || suite == "hs") {
    nvs::Potential v = make_potential(o, grid);
    reports.push_back(nvs::check_hs_limits(
        v, {Complex(0.5, 0), Complex(0.25, 0), Complex(0.125, 0)},
        {Complex(5, 0), Complex(10, 0), Complex(20, 0)}));
  }
  if (suite == "all" || suite == "shift") {
    nvs::Potential v = make_potential(o, grid);
    append(nvs::check_shift(v, parse_complex(zeta_s), parse_complex(lambda_s),
                            cfg));
  }
  if (suite == "all" || suite == "dbar-det") {
    nvs::Potential v = make_potential(o, grid);
    reports.push_back(
        nvs::check_dbar_det(v, parse_complex(lambda_s), fd_step));
  }
  if (suite == "all" || suite == "dbar-mu") {
    nvs::Potential v = make_potential(o, grid);
    Complex z = grid.nodes[grid.index(n / 2 + n / 16, n / 2 + n / 16)];
    reports.push_back(nvs::check_dbar_mu(v, z, parse_complex(lambda_s), fd_step));
  }
  if (reports.empty()) {
    throw std::invalid_argument(
        "verify: unknown suite '" + suite +
        "' (want all|ei|green|hs|shift|dbar-det|dbar-mu)");
  }

  Echo e = common_echo("verify", o);
  e.add("suite", suite);
  e.add("lambda", lambda_s);
  e.add("zeta", zeta_s);
  e.add("fd-step", nvs::fmt17(fd_step));
  auto out = open_out(resolve_out(o.out));
  e.write(out);
  out << nvs::verification_csv_header() << "\n";
  bool all_pass = true;
  for (const auto& r : reports) {
    out << nvs::verification_csv_row(r) << "\n";
    std::cerr << (r.pass ? "[pass] " : "[FAIL] ") << r.check_name
              << " residual=" << nvs::fmt17(r.residual)
              << " tol=" << nvs::fmt17(r.tolerance) << "\n";
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 3;
}

int cmd_obstruct(const CommonOpts& o, const std::string& lambdas_s,
                 const std::string& velocity_s, double t, double tau) {
  auto [half, n] = parse_grid(o.grid);
  nvs::Grid grid = nvs::make_grid(half, n);
  nvs::Potential v = make_potential(o, grid);
  std::vector<Complex> lambdas = parse_complex_list(lambdas_s);
  if (lambdas.empty()) throw std::invalid_argument("obstruct: need --lambdas");

  std::vector<nvs::ScatteringData> samples;
  for (Complex lambda : lambdas) {
    Complex delta = nvs::fredholm_det2(nvs::assemble(v, lambda, grid)).delta;
    if (std::abs(delta) < tau) {
      std::cerr << "obstruct: lambda " << nvs::fmt17(lambda)
                << " flagged (|delta| < tau), refusing sample\n";
      return 2;
    }
    samples.push_back(nvs::scattering_data(v, lambda));
  }
  nvs::ObstructionReport rep =
      nvs::obstruction_residuals(samples, parse_complex(velocity_s), t);
  std::string text = nvs::obstruction_text(rep);
  std::cout << text;
  if (!o.out.empty()) {
    Echo e = common_echo("obstruct", o);
    e.add("lambdas", lambdas_s);
    e.add("velocity", velocity_s);
    e.add("time", nvs::fmt17(t));
    e.add("tau", nvs::fmt17(tau));
    auto out = open_out(resolve_out(o.out));
    e.write(out);
    out << text;
  }
  return 0;
}

int cmd_replay(const std::string& input) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("replay: cannot open " + input);
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) break;
    std::string body = line.substr(2);
    auto eq = body.find(" = ");
    if (eq == std::string::npos) continue;
    std::string key = body.substr(0, eq);
    std::string val = body.substr(eq + 3);
    if (key == "version") continue;
    if (key == "command") {
      std::cout << "# subcommand: " << val << "\n";
      any = true;
      continue;
    }
    std::cout << key << " = " << val << "\n";
    any = true;
  }
  if (!any) throw std::runtime_error("replay: no config header in " + input);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nvscatter: direct scattering toolkit for the 2-D Schrodinger "
               "equation at zero energy"};
  app.require_subcommand(1);

  CommonOpts o_ei, o_green, o_mu, o_det, o_scat, o_ver, o_obs;
  std::string ei_points, green_points = "1,0", green_lambda = "1,0";
  std::string mu_lambda = "1,0";
  int mu_order = 1;
  std::string det_rect, det_list, scat_rect, scat_list;
  double det_tau = 1e-6, scat_tau = 1e-6, obs_tau = 1e-6;
  std::string ver_suite = "all", ver_lambda = "1,0.5", ver_zeta = "1,0";
  double ver_fd = 1e-3;
  std::string obs_lambdas = "1,0;1,1;2,-1", obs_velocity = "0,0";
  double obs_time = 1.0;
  std::string replay_input;

  auto* c_ei = app.add_subcommand("ei", "evaluate Ei and Ei(z)+Ei(conj z)");
  add_common(c_ei, o_ei, "ei.csv");
  c_ei->add_option("--points", ei_points, "z list re,im;re,im;...")->required();

  auto* c_green = app.add_subcommand("green", "evaluate the regularized Green function");
  add_common(c_green, o_green, "green.csv");
  c_green->add_option("--points", green_points, "z list re,im;...");
  c_green->add_option("--lambda", green_lambda, "spectral parameter re,im");

  auto* c_mu = app.add_subcommand("solve-mu", "solve the mu integral equation on the grid");
  add_common(c_mu, o_mu, "mu.csv");
  c_mu->add_option("--lambda", mu_lambda, "spectral parameter re,im");
  c_mu->add_option("--order", mu_order, "asymptotic order: 1, 2 or 3")
      ->check(CLI::Range(1, 3));

  auto* c_det = app.add_subcommand("det-scan", "modified Fredholm determinant over a lambda grid");
  add_common(c_det, o_det, "det.csv");
  c_det->add_option("--lambda-rect", det_rect, "re0,re1,im0,im1,step");
  c_det->add_option("--lambdas", det_list, "explicit list re,im;re,im;...");
  c_det->add_option("--tau", det_tau, "exceptional-flag threshold on |delta|");

  auto* c_scat = app.add_subcommand("scatter", "scattering data over a lambda grid");
  add_common(c_scat, o_scat, "scatter.csv");
  c_scat->add_option("--lambda-rect", scat_rect, "re0,re1,im0,im1,step");
  c_scat->add_option("--lambdas", scat_list, "explicit list re,im;re,im;...");
  c_scat->add_option("--tau", scat_tau, "skip lambda with |delta| below tau");

  auto* c_ver = app.add_subcommand("verify", "run verification suites");
  add_common(c_ver, o_ver, "report.csv");
  c_ver->add_option("suite", ver_suite,
                    "all|ei|green|hs|shift|dbar-det|dbar-mu");
  c_ver->add_option("--lambda", ver_lambda, "lambda for shift/dbar checks");
  c_ver->add_option("--zeta", ver_zeta, "shift for the translation check");
  c_ver->add_option("--fd-step", ver_fd, "Wirtinger finite-difference step");

  auto* c_obs = app.add_subcommand("obstruct", "traveling-wave obstruction residuals");
  add_common(c_obs, o_obs, "");
  c_obs->add_option("--lambdas", obs_lambdas, "sample list re,im;re,im;...");
  c_obs->add_option("--velocity", obs_velocity, "velocity c as re,im");
  c_obs->add_option("--time", obs_time, "evolution time t (nonzero)");
  c_obs->add_option("--tau", obs_tau, "exceptional threshold on |delta|");

  auto* c_rep = app.add_subcommand("replay", "reconstruct a run config from an output header");
  c_rep->add_option("input", replay_input, "output file to read")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_ei->parsed()) return cmd_ei(o_ei, ei_points);
    if (c_green->parsed()) return cmd_green(o_green, green_points, green_lambda);
    if (c_mu->parsed()) return cmd_solve_mu(o_mu, mu_lambda, mu_order);
    if (c_det->parsed()) return cmd_det_scan(o_det, det_rect, det_list, det_tau);
    if (c_scat->parsed())
      return cmd_scatter(o_scat, scat_rect, scat_list, scat_tau);
    if (c_ver->parsed())
      return cmd_verify(o_ver, ver_suite, ver_lambda, ver_zeta, ver_fd);
    if (c_obs->parsed())
      return cmd_obstruct(o_obs, obs_lambdas, obs_velocity, obs_time, obs_tau);
    if (c_rep->parsed()) return cmd_replay(replay_input);
  } catch (const nvs::NearSingularError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const nvs::EigenError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
