#pragma once

// Shared numerical kernels: quadrature, bracketed root finding, the standard
// normal distribution, piecewise polynomials and the two Euclidean projections
// used by the QP solver.

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace xipsi::numerics {

struct Interval {
  double lo;
  double hi;

  /// Throws DomainError unless lo < hi and both are finite.
  Interval(double lo_, double hi_);

  double width() const noexcept { return hi - lo; }
};

using RealFn = std::function<double(double)>;

inline constexpr double kDefaultQuadTol = 1e-9;
inline constexpr int kDefaultMaxDepth = 40;
inline constexpr double kDefaultRootTol = 1e-12;

/// Adaptive Simpson quadrature with Richardson correction.
///
/// Leaves that hit `max_depth` are accepted with their local error estimate; if
/// the summed estimate still exceeds `abs_tol` a ConvergenceError carrying the
/// best estimate is thrown.
double integrate_1d(const RealFn& f, Interval iv, double abs_tol = kDefaultQuadTol,
                    int max_depth = kDefaultMaxDepth);

/// integrate_1d over [lo, hi] split at the given interior points. Points
/// outside (lo, hi) and duplicates are ignored. The tolerance is shared among
/// the pieces in proportion to their width.
double integrate_piecewise(const RealFn& f, double lo, double hi, std::span<const double> cuts,
                           double abs_tol = kDefaultQuadTol, int max_depth = kDefaultMaxDepth);

/// Bisection on a sign change. Returns the midpoint of the final bracket,
/// whose width is at most abs_tol (or an endpoint where f vanishes exactly).
double find_root_bracketed(const RealFn& f, Interval iv, double abs_tol = kDefaultRootTol);

double std_normal_cdf(double x);

/// Inverse of the standard normal CDF; p must lie in (0, 1).
double std_normal_quantile(double p);

/// Euclidean projection onto {y : 0 <= y_i <= 1, mean(y) = target_mean}.
std::vector<double> project_capped_simplex(std::span<const double> x, double target_mean);

/// In-place variant used by the QP inner loop.
void project_capped_simplex_inplace(std::span<double> x, double target_mean);

/// Euclidean projection onto the non-decreasing cone (pool adjacent violators).
std::vector<double> isotonic_project(std::span<const double> x);

/// Projection onto {y non-decreasing, lo <= y_i <= hi}: PAV followed by clipping.
void isotonic_box_project_inplace(std::span<double> x, double lo, double hi);

/// Piecewise polynomial of degree <= 3 on [0, 1] (or any ascending breakpoint
/// list). Piece k covers [b_k, b_{k+1}) and is stored in the local variable
/// x - b_k; the last piece is closed on the right.
class PiecewisePoly {
public:
  using Coeffs = std::array<double, 4>;

  PiecewisePoly() = default;
  PiecewisePoly(std::vector<double> breakpoints, std::vector<Coeffs> coeffs);

  static PiecewisePoly constant(double c, double lo = 0.0, double hi = 1.0);

  double operator()(double x) const;
  /// Value at x approached from the left (differs from operator() at jumps).
  double left_limit(double x) const;

  /// Antiderivative vanishing at the first breakpoint. Continuous by construction.
  PiecewisePoly antiderivative() const;
  double integral() const;

  /// Largest jump across interior breakpoints.
  double max_jump() const;
  bool is_continuous(double tol = 1e-12) const { return max_jump() <= tol; }

  std::size_t piece_of(double x) const;
  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  const std::vector<Coeffs>& coeffs() const noexcept { return coeffs_; }
  std::size_t pieces() const noexcept { return coeffs_.size(); }

private:
  static double eval_local(const Coeffs& c, double dx) noexcept {
    return c[0] + dx * (c[1] + dx * (c[2] + dx * c[3]));
  }

  std::vector<double> breaks_;
  std::vector<Coeffs> coeffs_;
};

}  // namespace xipsi::numerics
