#include <algorithm>
#include <cmath>
#include <sstream>

#include "xipsi/numerics.hpp"
#include "xipsi/optimize.hpp"
#include "xipsi/parallel.hpp"

namespace xipsi::optimize {

using gridcop::diagonal_mask;
using gridcop::midpoint;

QPProblem QPProblem::make(double mu, std::size_t n) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("QPProblem: mu must be finite and >= 0");
  if (n < 2) throw DomainError("QPProblem: n must be at least 2");
  return QPProblem{mu, n};
}

double qp_objective(const QPProblem& p, std::span<const double> h) {
  const std::size_t n = p.n;
  if (h.size() != n * n) throw DomainError("qp_objective: field must be n x n");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = h[i * n + j];
      acc += p.mu * diagonal_mask(i, j) * x + x * x;
    }
  return 6.0 * acc / static_cast<double>(n * n);
}

double feasibility_residual(std::size_t n, std::span<const double> h) {
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += h[i * n + j];
    worst = std::max(worst, std::abs(s / n - midpoint(j, n)));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = h[i * n + j];
      worst = std::max({worst, -x, x - 1.0});
      if (j + 1 < n) worst = std::max(worst, x - h[i * n + j + 1]);
    }
  return worst;
}

namespace {

// Dykstra's method for the projection of z onto the intersection of
//   A = {box, column means fixed} and B = {box, rows non-decreasing}.
// The state survives between calls so that repeated projections of the same
// point continue where the previous one stopped.
class Dykstra {
public:
  Dykstra(std::size_t n, std::vector<double> z)
      : n_(n), z_(std::move(z)), x_(z_), y_(n * n), p_(n * n, 0.0), q_(n * n, 0.0) {}

  const std::vector<double>& iterate() const noexcept { return x_; }

  // Returns the number of sweeps performed.
  std::size_t run(std::size_t max_sweeps, double tol) {
    std::size_t s = 0;
    while (s < max_sweeps) {
      ++s;
      if (sweep() < tol) break;
    }
    return s;
  }

private:
  double sweep() {
    const std::size_t n = n_;
    for (std::size_t k = 0; k < n * n; ++k) y_[k] = x_[k] + p_[k];
    parallel::parallel_for(n, [&](std::size_t j) {
      thread_local std::vector<double> col;
      col.resize(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = y_[i * n + j];
      numerics::project_capped_simplex_inplace(col, midpoint(j, n));
      for (std::size_t i = 0; i < n; ++i) y_[i * n + j] = col[i];
    });
    for (std::size_t k = 0; k < n * n; ++k) p_[k] += x_[k] - y_[k];

    std::vector<double>& prev = x_;
    std::vector<double> row_change(n, 0.0);
    parallel::parallel_for(n, [&](std::size_t i) {
      thread_local std::vector<double> row;
      row.resize(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = y_[i * n + j] + q_[i * n + j];
      numerics::isotonic_box_project_inplace(row, 0.0, 1.0);
      double ch = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = i * n + j;
        q_[k] += y_[k] - row[j];
        ch = std::max(ch, std::abs(row[j] - prev[k]));
        prev[k] = row[j];
      }
      row_change[i] = ch;
    });
    return *std::max_element(row_change.begin(), row_change.end());
  }

  std::size_t n_;
  std::vector<double> z_;
  std::vector<double> x_, y_, p_, q_;
};

}  // namespace

QPSolution qp_solve(const QPProblem& p, const QpOptions& opt) {
  const std::size_t n = p.n;
  std::vector<double> h(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h[i * n + j] = midpoint(j, n);

  QPSolution sol;
  std::vector<double> z(n * n), last_z;
  std::optional<Dykstra> proj;
  std::vector<double> history;

  for (std::size_t it = 1; it <= opt.max_iters; ++it) {
    // Gradient step of length 1/12 on 6 mean(mu m h + h^2).
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = i * n + j;
        z[k] = h[k] - (p.mu * diagonal_mask(i, j) + 2.0 * h[k]) / 2.0;
      }
    // The step maps every iterate to the same point up to rounding; keep the
    // Dykstra state unless the target genuinely moved.
    double moved = proj ? 0.0 : 1.0;
    for (std::size_t k = 0; proj && k < n * n; ++k) moved = std::max(moved, std::abs(z[k] - last_z[k]));
    if (moved > 1e-12) {
      proj.emplace(n, z);
      last_z = z;
    }
    sol.sweeps += proj->run(opt.inner_sweeps, opt.inner_tol);
    const std::vector<double>& next = proj->iterate();

    double step = 0.0;
    for (std::size_t k = 0; k < n * n; ++k) step = std::max(step, std::abs(next[k] - h[k]));
    h = next;

    const double obj = qp_objective(p, h);
    const double feas = feasibility_residual(n, h);
    sol.log.push_back({it, obj, feas});
    history.push_back(obj);
    sol.iterations = it;
    sol.objective = obj;
    sol.feasibility_residual = feas;
    sol.stationarity_residual = step;

    if (history.size() > opt.window && feas <= opt.feas_tol &&
        std::abs(history[history.size() - 1 - opt.window] - obj) < opt.obj_tol)
      break;
  }
  sol.h = GridCopula::unchecked(n, h);
  const bool ok = sol.feasibility_residual <= opt.feas_tol && sol.log.size() > opt.window &&
                  std::abs(history[history.size() - 1 - opt.window] - sol.objective) < opt.obj_tol;
  if (!ok) {
    std::ostringstream os;
    os << "qp_solve: no convergence after " << sol.iterations
       << " iterations (feasibility residual " << sol.feasibility_residual << ")";
    throw QpConvergenceError(os.str(), std::move(sol));
  }
  return sol;
}

Density qp_density_export(const GridCopula& g) {
  const std::size_t n = g.n();
  Density d{n, std::vector<double>(n * n), 0.0, 0.0};
  std::vector<double> edge(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    edge[0] = 0.0;
    edge[n] = 1.0;
    for (std::size_t j = 1; j < n; ++j) edge[j] = 0.5 * (g(i, j - 1) + g(i, j));
    for (std::size_t j = 0; j < n; ++j) {
      double c = static_cast<double>(n) * (edge[j + 1] - edge[j]);
      if (c < 0.0) {
        d.clipped = std::max(d.clipped, -c);
        c = 0.0;
      }
      d.c[i * n + j] = c;
      d.max = std::max(d.max, c);
    }
  }
  return d;
}

}  // namespace xipsi::optimize
