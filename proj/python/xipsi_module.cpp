#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xipsi/boundary.hpp"
#include "xipsi/descriptor.hpp"
#include "xipsi/errors.hpp"
#include "xipsi/families.hpp"
#include "xipsi/optimize.hpp"
#include "xipsi/twoparam.hpp"

namespace py = pybind11;
using namespace xipsi;

namespace {

py::dict report(const gridcop::MeasureReport& r) {
  py::dict d;
  d["xi"] = r.xi;
  d["psi"] = r.psi;
  d["tau"] = r.tau ? py::object(py::float_(*r.tau)) : py::object(py::none());
  d["method"] = gridcop::to_string(r.method);
  d["n_or_tol"] = r.n_or_tol;
  d["note"] = r.note;
  return d;
}

gridcop::GridCopula grid_of(py::array_t<double, py::array::c_style | py::array::forcecast> h) {
  if (h.ndim() != 2 || h.shape(0) != h.shape(1))
    throw DomainError("h must be a square two-dimensional array");
  const auto n = static_cast<std::size_t>(h.shape(0));
  return gridcop::GridCopula(n, std::vector<double>(h.data(), h.data() + n * n));
}

py::array_t<double> to_array(const gridcop::GridCopula& g) {
  const auto n = static_cast<py::ssize_t>(g.n());
  py::array_t<double> a({n, n});
  std::copy(g.values().begin(), g.values().end(), a.mutable_data());
  return a;
}

}  // namespace

PYBIND11_MODULE(_xipsi, m) {
  m.doc() = "Chatterjee's xi and Spearman's footrule for copulas";

  static py::exception<InfeasibleError> infeasible(m, "InfeasibleError", PyExc_ValueError);
  static py::exception<ConvergenceError> convergence(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InfeasibleError& e) {
      py::set_error(infeasible, e.what());
    } catch (const DomainError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ConvergenceError& e) {
      py::set_error(convergence, e.what());
    }
  });

  m.def("measures_json",
        [](const std::string& text, std::size_t grid_n, double quad_tol) {
          return report(descriptor::measures(nlohmann::json::parse(text), {grid_n, quad_tol}));
        },
        py::arg("descriptor"), py::arg("grid_n") = 400, py::arg("quad_tol") = 1e-6);

  m.def("grid_measures",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> h, bool with_tau) {
          return report(gridcop::grid_measures(grid_of(h), with_tau));
        },
        py::arg("h"), py::arg("with_tau") = true);

  m.def("cdown_measures", [](double mu) {
    const auto r = families::cdown_measures(mu);
    return py::make_tuple(r.xi, r.psi);
  });
  m.def("gaussian_measures", [](double rho) {
    const auto r = families::gaussian_measures(rho);
    return py::make_tuple(r.xi, r.psi);
  });

  m.def("upper_psi_max", &boundary::upper_psi_max);
  m.def("mu_of_y", &boundary::mu_of_y);
  m.def("kkt_residual_upper", &boundary::kkt_residual_upper, py::arg("x"), py::arg("n"),
        py::arg("offset") = 0.0);
  m.def("si_region_check",
        [](double xi, double psi, double tol) {
          return boundary::si_region_check(boundary::RegionPoint::make(xi, psi), tol);
        },
        py::arg("xi"), py::arg("psi"), py::arg("tol") = 1e-12);
  m.def("region_check", [](double xi, double psi) {
    const auto v = boundary::region_check(boundary::RegionPoint::make(xi, psi));
    py::dict d;
    d["in_upper"] = v.in_upper;
    d["in_lower_bound"] = v.in_lower_bound;
    d["in_si_region"] = v.in_si_region;
    d["upper_margin"] = v.upper_margin;
    d["lower_margin"] = v.lower_margin ? py::object(py::float_(*v.lower_margin)) : py::object(py::none());
    d["si_margin"] = v.si_margin;
    return d;
  });
  m.def("boundary", [](const std::string& curve, std::size_t samples) {
    std::vector<std::tuple<double, double, double>> out;
    for (const auto& r : boundary::boundary_export(boundary::curve_from_string(curve), samples))
      out.emplace_back(r.param, r.xi, r.psi);
    return out;
  });

  m.def("path_params", [](double mu) {
    const auto p = twoparam::path_params(mu);
    return py::make_tuple(p.alpha, p.beta);
  });
  m.def("strip_measures",
        [](double alpha, double beta, double tol) {
          const auto r = twoparam::StripCopula::build(alpha, beta).measures(tol);
          return py::make_tuple(r.xi, r.psi);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("tol") = 1e-6);
  m.def("strip_partial", [](double alpha, double beta, double u, double v) {
    return twoparam::StripCopula::build(alpha, beta).partial(u, v);
  });
  m.def("strip_density", [](double alpha, double beta, double u, double v) {
    return twoparam::StripCopula::build(alpha, beta).density(u, v);
  });

  m.def("qp_solve",
        [](double mu, std::size_t n) {
          const auto sol = optimize::qp_solve(optimize::QPProblem::make(mu, n));
          py::dict d;
          d["h"] = to_array(sol.h);
          d["objective"] = sol.objective;
          d["iterations"] = sol.iterations;
          d["feasibility_residual"] = sol.feasibility_residual;
          d["stationarity_residual"] = sol.stationarity_residual;
          return d;
        },
        py::arg("mu"), py::arg("n"));
}
