#pragma once

// Discretised copulas represented by their first partial derivative
// h(t, v) = d/du C(u, v) at u = t, sampled on an n x n midpoint grid, and the
// dependence measures evaluated on that representation.

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace xipsi::gridcop {

/// Where a MeasureReport's numbers come from.
enum class Method { exact, grid, quadrature };

std::string to_string(Method m);

struct MeasureReport {
  double xi = 0.0;
  double psi = 0.0;
  std::optional<double> tau;
  Method method = Method::exact;
  /// Grid size for Method::grid, absolute tolerance for Method::quadrature,
  /// zero for closed forms.
  double n_or_tol = 0.0;
  /// Free-form remark, e.g. why a closed form was not used.
  std::string note;
};

using PartialFn = std::function<double(double t, double v)>;

/// Cell midpoint (k + 1/2) / n for zero-based k.
inline double midpoint(std::size_t k, std::size_t n) {
  return (static_cast<double>(k) + 0.5) / static_cast<double>(n);
}

/// Cell average of 1{t <= v} on the (i, j) cell of the midpoint grid.
inline double diagonal_mask(std::size_t i, std::size_t j) {
  return i < j ? 1.0 : (i == j ? 0.5 : 0.0);
}

class GridCopula {
public:
  /// Row-major values, h[i * n + j] with i indexing t and j indexing v.
  /// Validates the box constraint and the column means against feas_tol
  /// (default 2/n); throws InfeasibleError naming the worst column.
  GridCopula(std::size_t n, std::vector<double> h, std::optional<double> feas_tol = std::nullopt);

  /// Skips the feasibility check. Used for solver iterates and pseudo-copulas.
  static GridCopula unchecked(std::size_t n, std::vector<double> h);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return h_[i * n_ + j]; }
  std::span<const double> values() const noexcept { return h_; }
  std::span<const double> row(std::size_t i) const noexcept { return {h_.data() + i * n_, n_}; }

  /// max_j |mean_i h[i][j] - v_j|.
  double column_mean_violation() const;
  /// Largest amount by which an entry leaves [0, 1].
  double box_violation() const;
  /// Largest decrease h[i][j] - h[i][j+1] along v.
  double monotonicity_violation() const;

  /// Marks the grid as stochastically increasing after verifying it.
  GridCopula with_si_flag(double tol = 1e-12) const;
  bool si_flag() const noexcept { return si_flag_; }

private:
  GridCopula() = default;

  std::size_t n_ = 0;
  std::vector<double> h_;
  bool si_flag_ = false;
};

/// Samples dC1 at the cell midpoints.
GridCopula grid_from_partial(const PartialFn& dC1, std::size_t n,
                             std::optional<double> feas_tol = std::nullopt);

/// 6 * mean(h^2) - 2.
double xi_grid(const GridCopula& g);

/// 6 * mean(mask * h) - 2 with mask the cell average of 1{t <= v}.
double psi_grid(const GridCopula& g);

/// C(u_i, v_j) at the right cell edge u_i = (i + 1) / n and midpoint v_j.
std::vector<double> cdf_from_h(const GridCopula& g);

/// 1 - 4 * mean(h * d/dv C) with d/dv C from finite differences of the
/// cell-centred C field along v.
double tau_grid(const GridCopula& g);

/// Per-column mean of h^2, i.e. (C^T * C)(v_j, v_j).
std::vector<double> markov_diag(const GridCopula& g);

/// True iff every column is non-increasing in t up to tol.
bool is_si(const GridCopula& g, double tol = 1e-12);

/// xi and psi (and tau when requested) of a grid.
MeasureReport grid_measures(const GridCopula& g, bool with_tau = false);

/// CSV with a `# gridcop n=<n>` header line and n rows of n values.
void write_csv(std::ostream& os, const GridCopula& g);
GridCopula read_csv(std::istream& is, std::optional<double> feas_tol = std::nullopt);

}  // namespace xipsi::gridcop
