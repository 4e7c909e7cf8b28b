#include <algorithm>
#include <cmath>

#include "xipsi/optimize.hpp"
#include "xipsi/parallel.hpp"
#include "xipsi/twoparam.hpp"

namespace xipsi::optimize {

using families::Family;

double objective_value(Objective o, double xi, double psi) {
  return o == Objective::max_psi_minus_xi ? psi - xi : xi + psi;
}

namespace {

bool better(Objective o, double a, double b) {
  return o == Objective::max_psi_minus_xi ? a > b : a < b;
}

}  // namespace

SearchRow grid_search_extremizer(const std::function<MeasureReport(double)>& measure,
                                 Objective o, const std::vector<double>& params) {
  if (params.empty()) throw DomainError("grid_search_extremizer: empty parameter grid");
  std::vector<SearchRow> rows(params.size());
  parallel::parallel_for(params.size(), [&](std::size_t k) {
    const MeasureReport r = measure(params[k]);
    rows[k] = SearchRow{params[k], r.xi, r.psi, objective_value(o, r.xi, r.psi)};
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const bool win = better(o, rows[k].value, rows[best].value) ||
                     (rows[k].value == rows[best].value && rows[k].param < rows[best].param);
    if (win) best = k;
  }
  return rows[best];
}

std::vector<double> param_range(double lo, double hi, double step,
                                const std::function<bool(double)>& keep) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("param_range: need step > 0 and hi >= lo");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-3));
  for (std::size_t k = 0; k <= count; ++k) {
    // Snap to a 1e-9 lattice so that coarse and fine grids share values.
    const double x = std::round((lo + static_cast<double>(k) * step) * 1e9) / 1e9;
    if (!keep || keep(x)) out.push_back(x);
  }
  return out;
}

namespace {

MeasureReport family_measures(Family f, double theta, std::size_t n) {
  if (f == Family::gaussian) return families::gaussian_measures(theta);
  return families::parametric_measures_grid(families::ParametricCopula(f, theta), n);
}

SearchRow coarse_fine(const std::function<MeasureReport(double, bool)>& measure, Objective o,
                      const SearchPlan& plan, const std::function<bool(double)>& keep) {
  const auto coarse = grid_search_extremizer([&](double x) { return measure(x, false); }, o,
                                             param_range(plan.lo, plan.hi, plan.coarse_step, keep));
  const double lo = std::max(plan.lo, coarse.param - plan.window);
  const double hi = std::min(plan.hi, coarse.param + plan.window);
  // Start the fine grid on the fine lattice anchored at plan.lo.
  const double start = plan.lo + std::ceil((lo - plan.lo) / plan.fine_step - 1e-6) * plan.fine_step;
  auto fine_params = param_range(start, hi, plan.fine_step, keep);
  if (fine_params.empty()) return coarse;
  return grid_search_extremizer([&](double x) { return measure(x, true); }, o, fine_params);
}

}  // namespace

SearchRow search_family(Family f, Objective o, const SearchPlan& plan) {
  return coarse_fine(
      [&](double x, bool fine) { return family_measures(f, x, fine ? plan.fine_n : plan.coarse_n); },
      o, plan, [f](double x) { return families::in_range(f, x); });
}

SearchRow search_strip_path(double lo, double hi, double tol) {
  SearchPlan plan{lo, hi};
  plan.window = 0.06;
  return coarse_fine(
      [&](double mu, bool fine) { return twoparam::strip_path(mu).measures(fine ? tol : 10.0 * tol); },
      Objective::min_psi_plus_xi, plan, {});
}

namespace {

TableRow run_row(const std::string& name, const std::string& method,
                 const std::function<SearchRow()>& fn) {
  TableRow t{name, std::nullopt, method, ""};
  try {
    t.row = fn();
  } catch (const std::exception& e) {
    t.error = e.what();
  }
  return t;
}

std::string grid_label(std::size_t n) { return "grid n=" + std::to_string(n); }

SearchRow closed_form_search(const std::function<MeasureReport(double)>& m, Objective o,
                             double lo, double hi) {
  return grid_search_extremizer(m, o, param_range(lo, hi, 0.002));
}

}  // namespace

std::vector<TableRow> table1(std::size_t n) {
  const Objective o = Objective::max_psi_minus_xi;
  auto fam = [&](Family f, double lo, double hi) {
    SearchPlan plan{lo, hi};
    plan.fine_n = n;
    return [f, o, plan] { return search_family(f, o, plan); };
  };
  std::vector<TableRow> rows;
  rows.push_back(run_row("Clayton", grid_label(n), fam(Family::clayton, 0.0, 10.0)));
  rows.push_back(run_row("Frank", grid_label(n), fam(Family::frank, 0.0, 20.0)));
  rows.push_back(run_row("Frechet", "exact", [o] {
    return closed_form_search(
        [](double a) { return families::frechet_measures(families::FrechetMixture::upper(a)); }, o,
        0.0, 1.0);
  }));
  rows.push_back(run_row("Gaussian", "exact", [o] {
    return closed_form_search(families::gaussian_measures, o, 0.0, 0.998);
  }));
  rows.push_back(run_row("Gumbel-Hougaard", grid_label(n), fam(Family::gumbel, 1.0, 10.0)));
  rows.push_back(run_row("Joe", grid_label(n), fam(Family::joe, 1.0, 10.0)));
  return rows;
}

std::vector<TableRow> table2(std::size_t n) {
  const Objective o = Objective::min_psi_plus_xi;
  auto fam = [&](Family f, double lo, double hi) {
    SearchPlan plan{lo, hi};
    plan.fine_n = n;
    return [f, o, plan] { return search_family(f, o, plan); };
  };
  std::vector<TableRow> rows;
  rows.push_back(run_row("C_down_mu", "exact", [o] {
    return closed_form_search(families::cdown_measures, o, 0.0, 2.0);
  }));
  rows.push_back(run_row("C_mu", "quadrature", [] { return search_strip_path(); }));
  rows.push_back(run_row("Clayton", grid_label(n), fam(Family::clayton, -0.99, 0.0)));
  rows.push_back(run_row("Frank", grid_label(n), fam(Family::frank, -20.0, 0.0)));
  rows.push_back(run_row("Gaussian", "exact", [o] {
    return closed_form_search(families::gaussian_measures, o, -0.998, 0.0);
  }));
  rows.push_back(run_row("Gumbel-Hougaard", grid_label(n), fam(Family::gumbel, 1.0, 5.0)));
  rows.push_back(run_row("Joe", grid_label(n), fam(Family::joe, 1.0, 5.0)));
  rows.push_back(run_row("Lower Frechet", "exact", [o] {
    return closed_form_search(
        [](double w) { return families::frechet_measures(families::FrechetMixture::lower(w)); }, o,
        0.0, 1.0);
  }));
  return rows;
}

}  // namespace xipsi::optimize
