#pragma once

// Analytic copula families and pseudo-copulas with their first partial
// derivatives and, where available, exact values of xi and psi.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "xipsi/gridcop.hpp"

namespace xipsi::families {

using gridcop::MeasureReport;

// ---------------------------------------------------------------------------
// Frechet mixtures w_pi * Pi + w_m * M + w_w * W

struct FrechetMixture {
  double w_pi = 1.0;
  double w_m = 0.0;
  double w_w = 0.0;

  /// Validates non-negativity and that the weights sum to one (1e-12).
  static FrechetMixture make(double w_pi, double w_m, double w_w);
  /// (1 - alpha) Pi + alpha M.
  static FrechetMixture upper(double alpha);
  /// (1 - w) Pi + w W.
  static FrechetMixture lower(double w);
};

double frechet_partial(const FrechetMixture& w, double t, double v);

/// Closed form for the two-component mixtures; a mixture with both M and W
/// present falls back to a grid of size `grid_n` and says so in the note.
MeasureReport frechet_measures(const FrechetMixture& w, std::size_t grid_n = 800);

// ---------------------------------------------------------------------------
// Ordinal sums of Pi

class OrdinalSumPi {
public:
  /// Intervals (a_k, b_k) must satisfy 0 <= a_k < b_k <= a_{k+1} <= 1.
  explicit OrdinalSumPi(std::vector<std::pair<double, double>> intervals);

  const std::vector<std::pair<double, double>>& intervals() const noexcept { return iv_; }

private:
  std::vector<std::pair<double, double>> iv_;
};

double ordinal_sum_partial(const OrdinalSumPi& os, double t, double v);
MeasureReport ordinal_sum_measures(const OrdinalSumPi& os);

// ---------------------------------------------------------------------------
// Checkerboard copulas

class CheckerboardMatrix {
public:
  /// delta[i][j] is the mass of the cell with u in row i and v in column j.
  /// Rows and columns must each sum to 1/n within 1e-9.
  explicit CheckerboardMatrix(std::vector<std::vector<double>> delta);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return mass_[i * n_ + j]; }

private:
  std::size_t n_;
  std::vector<double> mass_;
};

double checkerboard_partial(const CheckerboardMatrix& cb, double t, double v);

/// Exact xi and psi from per-cell polynomial integrals.
MeasureReport checkerboard_measures(const CheckerboardMatrix& cb);

/// Block sums over k x k blocks; cb.n() must be divisible by k.
CheckerboardMatrix coarsen(const CheckerboardMatrix& cb, std::size_t k);

// ---------------------------------------------------------------------------
// The Jensen lower-bound family C_mu (a pseudo-copula for mu > 0)

struct CDownMu {
  double mu;
  double v0;
  double v1;

  /// mu must lie in [0, 2].
  explicit CDownMu(double mu);
};

double cdown_partial(const CDownMu& c, double t, double v);
MeasureReport cdown_measures(double mu);

// ---------------------------------------------------------------------------
// SI copulas with xi = psi: h_v(t) = 1{t < A(v)} + alpha(v) 1{A(v) < t < B(v)}

struct EqualityClassCopula {
  std::function<double(double)> A;
  std::function<double(double)> B;

  double alpha(double v) const;
};

double equality_class_partial(const EqualityClassCopula& e, double t, double v);

/// Grid evaluation; validates A <= v <= B at the grid midpoints.
MeasureReport equality_class_check(const EqualityClassCopula& e, std::size_t n);

// ---------------------------------------------------------------------------
// Classical parametric families

enum class Family { gaussian, clayton, frank, gumbel, joe };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

struct ParametricCopula {
  Family family;
  double theta;

  /// Throws DomainError when theta is outside the family's range.
  ParametricCopula(Family f, double theta);
};

/// Whether theta is admissible for the family.
bool in_range(Family f, double theta);

double parametric_partial(const ParametricCopula& p, double t, double v);
double parametric_cdf(const ParametricCopula& p, double u, double v);

/// Known closed forms for the Gaussian copula:
/// xi = 3/pi asin((1 + rho^2)/2) - 1/2, psi = 3/pi asin((1 + rho)/2) - 1/2.
MeasureReport gaussian_measures(double rho);

MeasureReport parametric_measures_grid(const ParametricCopula& p, std::size_t n);

}  // namespace xipsi::families
