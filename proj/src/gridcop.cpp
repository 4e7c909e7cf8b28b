#include "xipsi/gridcop.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "xipsi/errors.hpp"

namespace xipsi::gridcop {

std::string to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::grid: return "grid";
    case Method::quadrature: return "quadrature";
  }
  return "unknown";
}

GridCopula::GridCopula(std::size_t n, std::vector<double> h, std::optional<double> feas_tol)
    : n_(n), h_(std::move(h)) {
  if (n_ < 2) throw DomainError("GridCopula: n must be at least 2");
  if (h_.size() != n_ * n_) throw DomainError("GridCopula: expected n*n values");
  for (double x : h_)
    if (!std::isfinite(x)) throw DomainError("GridCopula: non-finite entry");
  const double tol = feas_tol.value_or(2.0 / static_cast<double>(n_));
  if (const double bv = box_violation(); bv > 1e-9) {
    std::ostringstream os;
    os << "GridCopula: entries leave [0, 1] by " << bv;
    throw InfeasibleError(os.str());
  }
  double worst = 0.0;
  std::size_t worst_col = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += h_[i * n_ + j];
    const double dev = std::abs(s / static_cast<double>(n_) - midpoint(j, n_));
    if (dev > worst) {
      worst = dev;
      worst_col = j;
    }
  }
  if (worst > tol) {
    std::ostringstream os;
    os << "GridCopula: column mean constraint violated by " << worst << " at column " << worst_col
       << " (v = " << midpoint(worst_col, n_) << ", tolerance " << tol << ")";
    throw InfeasibleError(os.str());
  }
}

GridCopula GridCopula::unchecked(std::size_t n, std::vector<double> h) {
  if (n < 2 || h.size() != n * n) throw DomainError("GridCopula: expected n >= 2 and n*n values");
  GridCopula g;
  g.n_ = n;
  g.h_ = std::move(h);
  return g;
}

double GridCopula::column_mean_violation() const {
  std::vector<double> col(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) col[j] += h_[i * n_ + j];
  double worst = 0.0;
  for (std::size_t j = 0; j < n_; ++j)
    worst = std::max(worst, std::abs(col[j] / static_cast<double>(n_) - midpoint(j, n_)));
  return worst;
}

double GridCopula::box_violation() const {
  double worst = 0.0;
  for (double x : h_) worst = std::max({worst, -x, x - 1.0});
  return worst;
}

double GridCopula::monotonicity_violation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j + 1 < n_; ++j)
      worst = std::max(worst, h_[i * n_ + j] - h_[i * n_ + j + 1]);
  return worst;
}

GridCopula GridCopula::with_si_flag(double tol) const {
  if (!is_si(*this, tol)) throw InfeasibleError("GridCopula: field is not stochastically increasing");
  GridCopula g = *this;
  g.si_flag_ = true;
  return g;
}

GridCopula grid_from_partial(const PartialFn& dC1, std::size_t n, std::optional<double> feas_tol) {
  if (n < 2) throw DomainError("grid_from_partial: n must be at least 2");
  std::vector<double> h(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = midpoint(i, n);
    for (std::size_t j = 0; j < n; ++j) h[i * n + j] = dC1(t, midpoint(j, n));
  }
  return GridCopula(n, std::move(h), feas_tol);
}

double xi_grid(const GridCopula& g) {
  // Same summation order as markov_diag, so the two agree bit for bit.
  double s = 0.0;
  for (double x : markov_diag(g)) s += x;
  return 6.0 * s / static_cast<double>(g.n()) - 2.0;
}

double psi_grid(const GridCopula& g) {
  const std::size_t n = g.n();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = g.row(i);
    s += 0.5 * r[i];
    for (std::size_t j = i + 1; j < n; ++j) s += r[j];
  }
  const auto nn = static_cast<double>(n);
  return 6.0 * s / (nn * nn) - 2.0;
}

std::vector<double> cdf_from_h(const GridCopula& g) {
  const std::size_t n = g.n();
  const double w = 1.0 / static_cast<double>(n);
  std::vector<double> c(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += g(i, j) * w;
      c[i * n + j] = acc;
    }
  }
  return c;
}

double tau_grid(const GridCopula& g) {
  const std::size_t n = g.n();
  if (n < 4) throw DomainError("tau_grid: n must be at least 4");
  const double w = 1.0 / static_cast<double>(n);
  // C at cell centres (t_i, v_j).
  std::vector<double> c(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      c[i * n + j] = acc + 0.5 * g(i, j) * w;
      acc += g(i, j) * w;
    }
  }
  const auto nn = static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* ci = c.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      double d2;
      if (j == 0)
        d2 = (ci[1] - ci[0]) * nn;
      else if (j == n - 1)
        d2 = (ci[n - 1] - ci[n - 2]) * nn;
      else
        d2 = (ci[j + 1] - ci[j - 1]) * nn * 0.5;
      s += g(i, j) * d2;
    }
  }
  return 1.0 - 4.0 * s / (nn * nn);
}

std::vector<double> markov_diag(const GridCopula& g) {
  const std::size_t n = g.n();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[j] += g(i, j) * g(i, j);
  for (double& x : d) x /= static_cast<double>(n);
  return d;
}

bool is_si(const GridCopula& g, double tol) {
  const std::size_t n = g.n();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g(i + 1, j) > g(i, j) + tol) return false;
  return true;
}

MeasureReport grid_measures(const GridCopula& g, bool with_tau) {
  MeasureReport r;
  r.xi = xi_grid(g);
  r.psi = psi_grid(g);
  if (with_tau) r.tau = tau_grid(g);
  r.method = Method::grid;
  r.n_or_tol = static_cast<double>(g.n());
  return r;
}

void write_csv(std::ostream& os, const GridCopula& g) {
  const std::size_t n = g.n();
  const auto old_prec = os.precision(17);
  os << "# gridcop n=" << n << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) os << ',';
      os << g(i, j);
    }
    os << '\n';
  }
  os.precision(old_prec);
}

GridCopula read_csv(std::istream& is, std::optional<double> feas_tol) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("gridcop CSV: empty input");
  std::size_t n = 0;
  {
    const std::string tag = "# gridcop n=";
    if (line.rfind(tag, 0) != 0) throw DomainError("gridcop CSV: missing '# gridcop n=<n>' header");
    try {
      n = static_cast<std::size_t>(std::stoul(line.substr(tag.size())));
    } catch (const std::exception&) {
      throw DomainError("gridcop CSV: malformed grid size in header");
    }
  }
  if (n < 2) throw DomainError("gridcop CSV: n must be at least 2");
  std::vector<double> h;
  h.reserve(n * n);
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t cols = 0;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        h.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw DomainError("gridcop CSV: bad value '" + cell + "' in row " + std::to_string(rows));
      }
      ++cols;
    }
    if (cols != n)
      throw DomainError("gridcop CSV: row " + std::to_string(rows) + " has " + std::to_string(cols) +
                        " values, expected " + std::to_string(n));
    ++rows;
  }
  if (rows != n) throw DomainError("gridcop CSV: expected " + std::to_string(n) + " rows");
  return GridCopula(n, std::move(h), feas_tol);
}

}  // namespace xipsi::gridcop
