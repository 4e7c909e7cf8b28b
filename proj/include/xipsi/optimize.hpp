#pragma once

// The discretised convex program
//   minimise 6 mean(mu * mask * h + h^2)
//   s.t. 0 <= h <= 1, h non-decreasing in v, mean_t h(., v_j) = v_j,
// and parameter searches over copula families.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xipsi/errors.hpp"
#include "xipsi/families.hpp"
#include "xipsi/gridcop.hpp"

namespace xipsi::optimize {

using gridcop::GridCopula;
using gridcop::MeasureReport;

struct QPProblem {
  double mu;
  std::size_t n;

  /// Requires mu >= 0 and n >= 2.
  static QPProblem make(double mu, std::size_t n);
};

/// 6 * mean(mu * mask * h + h^2); equals mu (psi_grid + 2) + xi_grid + 2.
double qp_objective(const QPProblem& p, std::span<const double> h);

struct QpOptions {
  std::size_t max_iters = 2000;
  double obj_tol = 1e-12;
  std::size_t window = 50;
  double feas_tol = 1e-8;
  std::size_t inner_sweeps = 200;
  double inner_tol = 1e-10;
};

struct QpLogEntry {
  std::size_t iter;
  double objective;
  double feas_residual;
};

struct QPSolution {
  GridCopula h = GridCopula::unchecked(2, {0.5, 0.5, 0.5, 0.5});
  double objective = 0.0;
  std::size_t iterations = 0;
  std::size_t sweeps = 0;
  double feasibility_residual = 0.0;
  double stationarity_residual = 0.0;
  std::vector<QpLogEntry> log;
};

/// Raised when qp_solve runs out of iterations; keeps the last iterate.
class QpConvergenceError : public ConvergenceError {
public:
  QpConvergenceError(const std::string& what, QPSolution best)
      : ConvergenceError(what, best.objective, best.feasibility_residual),
        best_(std::move(best)) {}
  const QPSolution& best() const noexcept { return best_; }

private:
  QPSolution best_;
};

/// Projected gradient with step 1/12; each projection onto the feasible set
/// is computed by Dykstra's method alternating column and row projections.
QPSolution qp_solve(const QPProblem& p, const QpOptions& opt = {});

/// Max of the box, column-mean and monotonicity violations.
double feasibility_residual(std::size_t n, std::span<const double> h);

struct Density {
  std::size_t n;
  /// c[i * n + j] for u-cell i and v-cell j.
  std::vector<double> c;
  /// Largest negative value removed by clipping at zero.
  double clipped;
  double max;
};

/// Cell densities n * (h(t_i, v_{j+1/2}) - h(t_i, v_{j-1/2})) with edge values
/// averaged from neighbouring cells and pinned to 0 and 1 at v = 0 and v = 1.
Density qp_density_export(const GridCopula& h);

enum class Objective { max_psi_minus_xi, min_psi_plus_xi };

struct SearchRow {
  double param;
  double xi;
  double psi;
  double value;
};

double objective_value(Objective o, double xi, double psi);

/// Evaluates `measure` at every parameter (in order) and returns the best
/// row; ties go to the smallest parameter.
SearchRow grid_search_extremizer(const std::function<MeasureReport(double)>& measure,
                                 Objective o, const std::vector<double>& params);

/// lo, lo + step, ... up to hi inclusive (within step / 1000), skipping
/// values for which `keep` is false.
std::vector<double> param_range(double lo, double hi, double step,
                                const std::function<bool(double)>& keep = {});

/// Coarse sweep, then a fine sweep of step `fine_step` within
/// +-`window` of the coarse optimum.
struct SearchPlan {
  double lo;
  double hi;
  double coarse_step = 0.05;
  std::size_t coarse_n = 200;
  double fine_step = 0.002;
  double window = 0.1;
  std::size_t fine_n = 600;
};

SearchRow search_family(families::Family f, Objective o, const SearchPlan& plan);

struct TableRow {
  std::string family;
  std::optional<SearchRow> row;
  std::string method;
  std::string error;
};

/// Rows for the families compared by their largest gap psi - xi.
std::vector<TableRow> table1(std::size_t n = 600);
/// Rows for the families compared by their smallest sum xi + psi.
std::vector<TableRow> table2(std::size_t n = 600);

/// Minimiser of xi + psi along the strip path for mu in [lo, hi].
SearchRow search_strip_path(double lo = 0.0, double hi = 4.0, double tol = 1e-6);

}  // namespace xipsi::optimize
