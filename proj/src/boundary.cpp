#include "xipsi/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "xipsi/errors.hpp"
#include "xipsi/families.hpp"
#include "xipsi/numerics.hpp"
#include "xipsi/parallel.hpp"
#include "xipsi/twoparam.hpp"

namespace xipsi::boundary {

RegionPoint RegionPoint::make(double xi, double psi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("RegionPoint: xi must lie in [0, 1]");
  if (!(psi >= -0.5 && psi <= 1.0)) throw DomainError("RegionPoint: psi must lie in [-1/2, 1]");
  return RegionPoint{xi, psi};
}

double upper_psi_max(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("upper_psi_max: x must lie in [0, 1]");
  return std::sqrt(x);
}

RegionPoint jensen_curve(double mu) {
  const auto r = families::cdown_measures(mu);
  return RegionPoint{r.xi, r.psi};
}

double mu_of_y(double y) {
  if (!(y >= -0.5 && y <= 0.0)) throw DomainError("mu_of_y: y must lie in [-1/2, 0]");
  auto cubic = [y](double m) {
    return ((m - (4.0 + 2.0 * y)) * m - (4.0 + 8.0 * y)) * m - 8.0 * y;
  };
  return numerics::find_root_bracketed(cubic, numerics::Interval(0.0, 2.0), 1e-14);
}

RegionVerdict region_check(const RegionPoint& p, double tol) {
  RegionVerdict v{};
  const double root = std::sqrt(p.xi);
  v.upper_margin = root - p.psi;
  v.in_upper = v.upper_margin >= -tol;
  if (p.psi <= 0.0) {
    v.lower_margin = p.xi - jensen_curve(mu_of_y(p.psi)).xi;
    v.in_lower_bound = *v.lower_margin >= -tol;
  } else {
    v.in_lower_bound = true;
  }
  v.si_margin = std::min(p.psi - p.xi, root - p.psi);
  v.in_si_region = v.si_margin >= -tol;
  return v;
}

bool si_region_check(const RegionPoint& p, double tol) {
  return p.xi <= p.psi + tol && p.psi <= std::sqrt(p.xi) + tol;
}

double kkt_residual_upper(double x, std::size_t n, double offset) {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("kkt_residual_upper: x must lie in (0, 1]");
  if (n == 0) throw DomainError("kkt_residual_upper: n must be positive");
  const double a = std::sqrt(x);
  const double mu = 1.0 / (12.0 * a);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = gridcop::midpoint(i, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double v = gridcop::midpoint(j, n);
      const double ind = t <= v ? 1.0 : 0.0;
      const double h = (1.0 - a) * v + a * ind + offset;
      const double gamma = -((1.0 - a) / a) * v;
      worst = std::max(worst, std::abs(-ind + 12.0 * mu * h + gamma));
    }
  }
  return worst;
}

std::string to_string(Curve c) {
  switch (c) {
    case Curve::upper: return "upper";
    case Curve::jensen: return "jensen";
    case Curve::si_lower: return "si_lower";
    case Curve::path: return "path";
  }
  return "unknown";
}

Curve curve_from_string(const std::string& name) {
  if (name == "upper") return Curve::upper;
  if (name == "jensen") return Curve::jensen;
  if (name == "si_lower") return Curve::si_lower;
  if (name == "path") return Curve::path;
  throw DomainError("unknown curve '" + name + "'");
}

std::vector<CurveRow> boundary_export(Curve c, std::size_t samples) {
  if (samples < 2) throw DomainError("boundary_export: need at least 2 samples");
  const double top = c == Curve::jensen ? 2.0 : (c == Curve::path ? 4.0 : 1.0);
  std::vector<CurveRow> rows(samples);
  parallel::parallel_for(samples, [&](std::size_t s) {
    const double p = s + 1 == samples ? top : top * static_cast<double>(s) / (samples - 1);
    CurveRow r{p, 0.0, 0.0};
    switch (c) {
      case Curve::upper: {
        const auto m = families::frechet_measures(families::FrechetMixture::upper(p));
        r.xi = m.xi;
        r.psi = m.psi;
        break;
      }
      case Curve::jensen: {
        const auto q = jensen_curve(p);
        r.xi = q.xi;
        r.psi = q.psi;
        break;
      }
      case Curve::si_lower: {
        std::vector<std::pair<double, double>> iv;
        if (p > 0.0) iv.emplace_back(0.0, p);
        const auto m = families::ordinal_sum_measures(families::OrdinalSumPi(std::move(iv)));
        r.xi = m.xi;
        r.psi = m.psi;
        break;
      }
      case Curve::path: {
        const auto m = twoparam::strip_path(p).measures(1e-7);
        r.xi = m.xi;
        r.psi = m.psi;
        break;
      }
    }
    rows[s] = r;
  });
  return rows;
}

void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
  os << "param,xi,psi\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g\n", r.param, r.xi, r.psi);
    os << buf;
  }
}

}  // namespace xipsi::boundary
