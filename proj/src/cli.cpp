#include "xipsi/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "xipsi/boundary.hpp"
#include "xipsi/descriptor.hpp"
#include "xipsi/errors.hpp"
#include "xipsi/io.hpp"
#include "xipsi/optimize.hpp"
#include "xipsi/parallel.hpp"
#include "xipsi/twoparam.hpp"

namespace xipsi::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Flags {
  std::optional<std::size_t> n;
  std::optional<double> tol;
  std::optional<double> mu;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::size_t> samples;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> config;
  std::optional<std::size_t> threads;
};

// Flags win over the config file, which wins over the defaults.
struct Config {
  std::size_t grid_n = 400;
  double quad_tol = 1e-6;
  std::string output_dir;
  std::size_t threads = 0;
  std::optional<std::string> format;
  std::optional<double> mu, alpha, beta;
  std::size_t samples = 101;
  std::optional<std::string> out;
  bool n_given = false;
};

template <class T>
T config_value(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DomainError(std::string("config: bad value for '") + key + "'");
  }
}

Config resolve(const Flags& f) {
  Config c;
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw DomainError("config: cannot open " + *f.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw DomainError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("config: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "grid_n" || key == "n") {
        c.grid_n = config_value<std::size_t>(j, key.c_str());
        c.n_given = true;
      } else if (key == "quad_tol" || key == "tol") {
        c.quad_tol = config_value<double>(j, key.c_str());
      } else if (key == "output_dir") {
        c.output_dir = config_value<std::string>(j, key.c_str());
      } else if (key == "threads") {
        c.threads = config_value<std::size_t>(j, key.c_str());
      } else if (key == "format") {
        c.format = config_value<std::string>(j, key.c_str());
      } else if (key == "mu") {
        c.mu = config_value<double>(j, key.c_str());
      } else if (key == "alpha") {
        c.alpha = config_value<double>(j, key.c_str());
      } else if (key == "beta") {
        c.beta = config_value<double>(j, key.c_str());
      } else if (key == "samples") {
        c.samples = config_value<std::size_t>(j, key.c_str());
      } else if (key == "out") {
        c.out = config_value<std::string>(j, key.c_str());
      } else {
        throw DomainError("config: unknown key '" + key + "'");
      }
    }
  }
  if (f.n) {
    c.grid_n = *f.n;
    c.n_given = true;
  }
  if (f.tol) c.quad_tol = *f.tol;
  if (f.threads) c.threads = *f.threads;
  if (f.format) c.format = f.format;
  if (f.mu) c.mu = f.mu;
  if (f.alpha) c.alpha = f.alpha;
  if (f.beta) c.beta = f.beta;
  if (f.samples) c.samples = *f.samples;
  if (f.out) c.out = f.out;
  if (c.grid_n < 16) throw DomainError("grid size must be at least 16");
  if (!(c.quad_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  if (c.out && !c.output_dir.empty() && fs::path(*c.out).is_relative())
    c.out = (fs::path(c.output_dir) / *c.out).string();
  return c;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot write " + path);
  return os;
}

void emit_json(const json& j, const Config& c, std::ostream& out) {
  if (c.out) {
    auto os = open_out(*c.out);
    os << j.dump(2) << '\n';
  }
  out << j.dump(2) << '\n';
}

json measures_of_input(const std::string& input, const Config& c) {
  descriptor::Options opt{c.grid_n, c.quad_tol};
  const auto trimmed = input.find_first_not_of(" \t\n");
  if (trimmed != std::string::npos && input[trimmed] == '{') {
    json d;
    try {
      d = json::parse(input);
    } catch (const json::exception& e) {
      throw DomainError(std::string("descriptor: ") + e.what());
    }
    return descriptor::to_json(descriptor::measures(d, opt));
  }
  std::ifstream in(input);
  if (!in) throw DomainError("cannot open " + input);
  if (fs::path(input).extension() == ".csv") {
    const auto g = gridcop::read_csv(in);
    return descriptor::to_json(gridcop::grid_measures(g, g.n() >= 4));
  }
  json d;
  try {
    d = json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError(std::string("descriptor: ") + e.what());
  }
  return descriptor::to_json(descriptor::measures(d, opt));
}

void cmd_boundary(const std::string& curve, const Config& c, std::ostream& out) {
  const auto rows = boundary::boundary_export(boundary::curve_from_string(curve), c.samples);
  if (c.out) {
    auto os = open_out(*c.out);
    boundary::write_curve_csv(os, rows);
  } else {
    boundary::write_curve_csv(out, rows);
  }
}

std::string fmt(double x, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

void cmd_table(int which, const Config& c, std::ostream& out) {
  const std::size_t n = c.n_given ? c.grid_n : 600;
  const auto rows = which == 1 ? optimize::table1(n) : optimize::table2(n);
  const std::string last = which == 1 ? "psi-xi" : "xi+psi";
  const std::string format = c.format.value_or("text");

  std::ostringstream csv;
  csv << "family,param,xi,psi," << (which == 1 ? "psi_minus_xi" : "xi_plus_psi") << ",method\n";
  for (const auto& r : rows) {
    csv << r.family << ',';
    if (r.row)
      csv << fmt(r.row->param, 6) << ',' << fmt(r.row->xi, 6) << ',' << fmt(r.row->psi, 6) << ','
          << fmt(r.row->value, 6);
    else
      csv << "error,error,error,error";
    csv << ',' << r.method << '\n';
  }
  if (c.out) {
    auto os = open_out(*c.out);
    os << csv.str();
  }
  if (format == "csv") {
    out << csv.str();
    return;
  }
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json j{{"family", r.family}, {"method", r.method}};
      if (r.row) {
        j["param"] = r.row->param;
        j["xi"] = r.row->xi;
        j["psi"] = r.row->psi;
        j[which == 1 ? "psi_minus_xi" : "xi_plus_psi"] = r.row->value;
      } else {
        j["error"] = r.error;
      }
      arr.push_back(j);
    }
    out << arr.dump(2) << '\n';
    return;
  }
  if (format != "text") throw DomainError("table: format must be text, csv or json");
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %10s %9s %9s %9s  %s\n", "family", "param", "xi", "psi",
                last.c_str(), "method");
  out << line;
  for (const auto& r : rows) {
    if (r.row)
      std::snprintf(line, sizeof line, "%-16s %10.3f %9.3f %9.3f %9.3f  %s\n", r.family.c_str(),
                    r.row->param, r.row->xi, r.row->psi, r.row->value, r.method.c_str());
    else
      std::snprintf(line, sizeof line, "%-16s %10s  %s\n", r.family.c_str(), "error", r.error.c_str());
    out << line;
  }
}

double band_fraction(const io::Density& d, double threshold) {
  const auto below = std::count_if(d.c.begin(), d.c.end(), [&](double x) { return x < threshold; });
  return static_cast<double>(below) / static_cast<double>(d.c.size());
}

void write_density(const io::Density& d, const std::string& prefix, const std::string& format) {
  if (format == "pgm") {
    auto os = open_out(prefix + "_density.pgm");
    io::write_pgm(os, d);
    auto side = open_out(prefix + "_density.json");
    side << io::pgm_sidecar(d).dump(2) << '\n';
  } else if (format == "csv") {
    auto os = open_out(prefix + "_density.csv");
    io::write_density_csv(os, d);
  } else {
    throw DomainError("density format must be pgm or csv");
  }
}

int cmd_optimize(const Config& c, std::ostream& out) {
  if (!c.mu) throw DomainError("optimize: --mu is required");
  const auto p = optimize::QPProblem::make(*c.mu, c.grid_n);
  optimize::QPSolution sol;
  bool converged = true;
  std::string message;
  try {
    sol = optimize::qp_solve(p);
  } catch (const optimize::QpConvergenceError& e) {
    sol = e.best();
    converged = false;
    message = e.what();
  }
  const auto m = gridcop::grid_measures(sol.h);
  const auto d = optimize::qp_density_export(sol.h);
  json s{{"mu", p.mu},
         {"n", p.n},
         {"objective", sol.objective},
         {"xi", m.xi},
         {"psi", m.psi},
         {"feasibility_residual", sol.feasibility_residual},
         {"stationarity_residual", sol.stationarity_residual},
         {"iterations", sol.iterations},
         {"sweeps", sol.sweeps},
         {"converged", converged},
         {"band_fraction", band_fraction(d, 0.05)},
         {"density_max", d.max},
         {"density_clipped", d.clipped}};
  if (!converged) s["error"] = message;
  if (c.out) {
    const std::string& prefix = *c.out;
    {
      auto os = open_out(prefix + "_h.csv");
      gridcop::write_csv(os, sol.h);
    }
    {
      auto os = open_out(prefix + "_log.csv");
      io::write_qp_log(os, sol.log);
    }
    write_density(d, prefix, "pgm");
    write_density(d, prefix, "csv");
    auto os = open_out(prefix + "_summary.json");
    os << s.dump(2) << '\n';
  }
  out << s.dump(2) << '\n';
  return converged ? ok : no_convergence;
}

void cmd_region_check(double xi, double psi, std::ostream& out) {
  const auto p = boundary::RegionPoint::make(xi, psi);
  const auto v = boundary::region_check(p);
  json j{{"xi", xi},
         {"psi", psi},
         {"in_upper", v.in_upper},
         {"in_lower_bound", v.in_lower_bound},
         {"in_si_region", v.in_si_region},
         {"upper_margin", v.upper_margin},
         {"lower_margin", v.lower_margin ? json(*v.lower_margin) : json(nullptr)},
         {"si_margin", v.si_margin}};
  out << j.dump(2) << '\n';
}

void cmd_twoparam(const Config& c, std::ostream& out) {
  std::optional<twoparam::StripCopula> sc;
  json j;
  if (c.mu) {
    if (c.alpha || c.beta) throw DomainError("twoparam: give either --mu or --alpha/--beta");
    sc = twoparam::strip_path(*c.mu);
    j["mu"] = *c.mu;
  } else {
    if (!c.alpha || !c.beta) throw DomainError("twoparam: --alpha and --beta are required");
    sc = twoparam::StripCopula::build(*c.alpha, *c.beta);
  }
  const auto m = sc->measures(c.quad_tol);
  j["alpha"] = sc->alpha();
  j["beta"] = sc->beta();
  j["slope"] = sc->slope();
  j["xi"] = m.xi;
  j["psi"] = m.psi;
  j["tol"] = c.quad_tol;
  if (c.out) {
    const auto d = io::density_from_function(
        [&](double u, double v) { return sc->density(u, v); }, c.grid_n);
    write_density(d, *c.out, c.format.value_or("pgm"));
  }
  out << j.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chatterjee's xi and Spearman's footrule for copulas", "xipsi"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--n", f.n, "grid size (default 400; tables 600)");
  app.add_option("--tol", f.tol, "absolute quadrature tolerance (default 1e-6)");
  app.add_option("--mu", f.mu, "mu for optimize, twoparam");
  app.add_option("--alpha", f.alpha, "strip alpha");
  app.add_option("--beta", f.beta, "strip beta");
  app.add_option("--samples", f.samples, "boundary samples (default 101)");
  app.add_option("--out", f.out, "output file or prefix");
  app.add_option("--format", f.format, "text|csv|json for tables, pgm|csv for densities");
  app.add_option("--config", f.config, "JSON config file");
  app.add_option("--threads", f.threads, "worker threads (0 = XIPSI_THREADS or all cores)");

  std::string input, curve;
  double xi = 0.0, psi = 0.0;
  auto* measures = app.add_subcommand("measures", "xi and psi of a JSON descriptor or grid CSV");
  measures->add_option("input", input, "descriptor JSON text or a .json/.csv path")->required();
  auto* boundary_cmd = app.add_subcommand("boundary", "sample a region curve as CSV");
  boundary_cmd->add_option("curve", curve, "upper|jensen|si_lower|path")->required();
  auto* t1 = app.add_subcommand("table1", "families ranked by the gap psi - xi");
  auto* t2 = app.add_subcommand("table2", "families ranked by the sum xi + psi");
  auto* opt = app.add_subcommand("optimize", "solve the discretised program for --mu");
  auto* region = app.add_subcommand("region-check", "locate (xi, psi) relative to the region bounds");
  region->add_option("xi", xi)->required();
  region->add_option("psi", psi)->required();
  auto* two = app.add_subcommand("twoparam", "measures and density of a strip copula");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  }

  try {
    const Config c = resolve(f);
    parallel::set_num_threads(c.threads);
    if (*measures) emit_json(measures_of_input(input, c), c, out);
    else if (*boundary_cmd) cmd_boundary(curve, c, out);
    else if (*t1) cmd_table(1, c, out);
    else if (*t2) cmd_table(2, c, out);
    else if (*opt) return cmd_optimize(c, out);
    else if (*region) cmd_region_check(xi, psi, out);
    else if (*two) cmd_twoparam(c, out);
    return ok;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return infeasible;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << '\n';
    return no_convergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
}

}  // namespace xipsi::cli
