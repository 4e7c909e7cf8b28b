#pragma once

// Curves bounding the attainable (xi, psi) region and membership tests.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace xipsi::boundary {

struct RegionPoint {
  double xi;
  double psi;

  /// Requires xi in [0, 1] and psi in [-1/2, 1].
  static RegionPoint make(double xi, double psi);
};

struct RegionVerdict {
  bool in_upper;
  bool in_lower_bound;
  bool in_si_region;
  /// sqrt(xi) - psi.
  double upper_margin;
  /// xi - xi(C_mu(psi)); empty when psi > 0, where the bound says nothing.
  std::optional<double> lower_margin;
  /// min(psi - xi, sqrt(xi) - psi).
  double si_margin;
};

/// sqrt(x) for x in [0, 1].
double upper_psi_max(double x);

/// (xi, psi) of the Jensen lower-bound family at mu in [0, 2].
RegionPoint jensen_curve(double mu);

/// The root in [0, 2] of mu^3 - (4 + 2y) mu^2 - (4 + 8y) mu - 8y for y in [-1/2, 0].
double mu_of_y(double y);

/// Points within `tol` of a constraint count as satisfying it.
RegionVerdict region_check(const RegionPoint& p, double tol = 1e-12);

/// xi <= psi <= sqrt(xi), each side relaxed by `tol`.
bool si_region_check(const RegionPoint& p, double tol = 1e-12);

/// Largest |-1{t <= v} + 12 mu* (h* + offset) + gamma*(v)| over the n x n
/// midpoint grid, for the Frechet candidate with xi = x.
double kkt_residual_upper(double x, std::size_t n, double offset = 0.0);

enum class Curve { upper, jensen, si_lower, path };

std::string to_string(Curve c);
Curve curve_from_string(const std::string& name);

struct CurveRow {
  double param;
  double xi;
  double psi;
};

/// Uniform sweep of the curve's parameter: alpha in [0, 1] for upper and
/// si_lower, mu in [0, 2] for jensen, mu in [0, 4] for path.
std::vector<CurveRow> boundary_export(Curve c, std::size_t samples);

/// Header `param,xi,psi`, 15 significant digits.
void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows);

}  // namespace xipsi::boundary
