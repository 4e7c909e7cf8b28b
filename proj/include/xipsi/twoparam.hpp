#pragma once

// Strip copulas: a diagonal band of zero density
//   H = {(s, t) : floor(s) <= t <= floor(s) + beta}
// whose second marginal is restored by the transform v = F_T(t), and the
// one-parameter path through (alpha, beta) used for the lower region.

#include "xipsi/gridcop.hpp"
#include "xipsi/numerics.hpp"

namespace xipsi::twoparam {

using gridcop::MeasureReport;
using numerics::PiecewisePoly;

class StripCopula {
public:
  /// 0 <= alpha < 1/2 and 0 <= beta <= 1/2. Verifies the slice-length mass
  /// and the normalisation of f_T; a violation raises Error with the value.
  static StripCopula build(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double slope() const noexcept { return k_; }

  /// Lower edge of the band above s.
  double floor(double s) const { return floor_(s); }
  bool in_H(double s, double t) const;
  /// L(t): Lebesgue measure of {s : (s, t) in H}.
  double slice_length(double t) const { return L_(t); }
  double f_T(double t) const { return fT_(t); }
  double F_T(double t) const { return FT_(t); }
  /// Smallest t with F_T(t) = v.
  double quantile(double v) const;

  double density(double u, double v) const;
  /// d/du C(u, v), from the band geometry.
  double partial(double u, double v) const;

  /// xi and psi by iterated adaptive quadrature to absolute error `tol`.
  MeasureReport measures(double tol = 1e-4) const;

  const PiecewisePoly& floor_poly() const noexcept { return floor_; }
  const PiecewisePoly& L_poly() const noexcept { return L_; }
  const PiecewisePoly& fT_poly() const noexcept { return fT_; }
  const PiecewisePoly& FT_poly() const noexcept { return FT_; }

private:
  StripCopula() = default;

  double alpha_ = 0.0;
  double beta_ = 0.0;
  double k_ = 1.0;
  PiecewisePoly floor_;
  PiecewisePoly L_;
  PiecewisePoly fT_;
  PiecewisePoly FT_;
};

struct PathParams {
  double mu;
  double alpha;
  double beta;
};

/// alpha = 3 mu / 20 up to mu = 2, then 1/2 - 2 / (5 mu); beta = min(mu, 2) / 4.
PathParams path_params(double mu);
StripCopula strip_path(double mu);

}  // namespace xipsi::twoparam
