#include <cmath>
#include <numbers>
#include <sstream>

#include "xipsi/errors.hpp"
#include "xipsi/families.hpp"
#include "xipsi/numerics.hpp"

namespace xipsi::families {

using numerics::std_normal_cdf;
using numerics::std_normal_quantile;

std::string to_string(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::clayton: return "clayton";
    case Family::frank: return "frank";
    case Family::gumbel: return "gumbel";
    case Family::joe: return "joe";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "clayton") return Family::clayton;
  if (name == "frank") return Family::frank;
  if (name == "gumbel" || name == "gumbel_hougaard") return Family::gumbel;
  if (name == "joe") return Family::joe;
  throw DomainError("unknown parametric family '" + name + "'");
}

bool in_range(Family f, double theta) {
  if (!std::isfinite(theta)) return false;
  switch (f) {
    case Family::gaussian: return theta > -1.0 && theta < 1.0;
    case Family::clayton: return theta > -1.0 && theta != 0.0;
    case Family::frank: return theta != 0.0;
    case Family::gumbel:
    case Family::joe: return theta >= 1.0;
  }
  return false;
}

ParametricCopula::ParametricCopula(Family f, double th) : family(f), theta(th) {
  if (!in_range(f, th)) {
    std::ostringstream os;
    os << to_string(f) << ": parameter " << th << " outside the admissible range";
    throw DomainError(os.str());
  }
}

namespace {

double clayton_partial(double theta, double t, double v) {
  // base = t^-theta + v^-theta - 1, kept accurate for small |theta|
  const double em_t = std::expm1(-theta * std::log(t));
  const double em_v = std::expm1(-theta * std::log(v));
  const double s = em_t + em_v;
  if (s <= -1.0) return 0.0;
  return std::exp((-theta - 1.0) * std::log(t) + (-1.0 / theta - 1.0) * std::log1p(s));
}

double frank_partial(double theta, double t, double v) {
  const double et = std::expm1(-theta * t);
  const double ev = std::expm1(-theta * v);
  const double e1 = std::expm1(-theta);
  return std::exp(-theta * t) * ev / (e1 + et * ev);
}

double gumbel_partial(double theta, double t, double v) {
  if (theta == 1.0) return v;
  const double x = -std::log(t), y = -std::log(v);
  const double lx = std::log(x);
  const double la = std::log(std::pow(x, theta) + std::pow(y, theta));
  return std::exp(-std::exp(la / theta) + (1.0 / theta - 1.0) * la + (theta - 1.0) * lx + x);
}

double joe_partial(double theta, double t, double v) {
  const double ub = std::pow(1.0 - t, theta);
  const double vb = std::pow(1.0 - v, theta);
  const double s = ub + vb - ub * vb;
  return std::pow(s, 1.0 / theta - 1.0) * std::pow(1.0 - t, theta - 1.0) * (1.0 - vb);
}

double gaussian_partial(double rho, double t, double v) {
  if (rho == 0.0) return v;
  return std_normal_cdf((std_normal_quantile(v) - rho * std_normal_quantile(t)) /
                        std::sqrt(1.0 - rho * rho));
}

}  // namespace

double parametric_partial(const ParametricCopula& p, double t, double v) {
  if (!(t > 0.0 && t < 1.0 && v > 0.0 && v < 1.0))
    throw DomainError("parametric_partial: (t, v) must lie in (0, 1)^2");
  switch (p.family) {
    case Family::gaussian: return gaussian_partial(p.theta, t, v);
    case Family::clayton: return clayton_partial(p.theta, t, v);
    case Family::frank: return frank_partial(p.theta, t, v);
    case Family::gumbel: return gumbel_partial(p.theta, t, v);
    case Family::joe: return joe_partial(p.theta, t, v);
  }
  return NAN;
}

double parametric_cdf(const ParametricCopula& p, double u, double v) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  const double th = p.theta;
  switch (p.family) {
    case Family::clayton: {
      const double s = std::expm1(-th * std::log(u)) + std::expm1(-th * std::log(v));
      if (s <= -1.0) return 0.0;
      return std::exp(-std::log1p(s) / th);
    }
    case Family::frank:
      return -std::log1p(std::expm1(-th * u) * std::expm1(-th * v) / std::expm1(-th)) / th;
    case Family::gumbel: {
      const double a = std::pow(-std::log(u), th) + std::pow(-std::log(v), th);
      return std::exp(-std::pow(a, 1.0 / th));
    }
    case Family::joe: {
      const double ub = std::pow(1.0 - u, th), vb = std::pow(1.0 - v, th);
      return 1.0 - std::pow(ub + vb - ub * vb, 1.0 / th);
    }
    case Family::gaussian:
      return numerics::integrate_1d([&](double t) { return t <= 0.0 ? 0.0 : gaussian_partial(th, t, v); },
                                    numerics::Interval(0.0, u), 1e-12);
  }
  return NAN;
}

MeasureReport gaussian_measures(double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw DomainError("gaussian_measures: rho must lie in (-1, 1)");
  MeasureReport r;
  r.xi = 3.0 / std::numbers::pi * std::asin(0.5 * (1.0 + rho * rho)) - 0.5;
  r.psi = 3.0 / std::numbers::pi * std::asin(0.5 * (1.0 + rho)) - 0.5;
  r.method = gridcop::Method::exact;
  return r;
}

namespace {

// Fills the midpoint grid using per-axis precomputation; agrees with
// parametric_partial cell by cell.
std::vector<double> parametric_field(const ParametricCopula& p, std::size_t n) {
  std::vector<double> h(n * n);
  std::vector<double> a(n), b(n), c(n), d(n);
  const double th = p.theta;
  auto at = [n](std::size_t k) { return gridcop::midpoint(k, n); };
  switch (p.family) {
    case Family::gaussian: {
      const double s = std::sqrt(1.0 - th * th);
      for (std::size_t k = 0; k < n; ++k) a[k] = std_normal_quantile(at(k));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          h[i * n + j] = th == 0.0 ? at(j) : std_normal_cdf((a[j] - th * a[i]) / s);
      break;
    }
    case Family::clayton: {
      for (std::size_t k = 0; k < n; ++k) {
        a[k] = std::log(at(k));
        b[k] = std::expm1(-th * a[k]);
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double s = b[i] + b[j];
          h[i * n + j] =
              s <= -1.0 ? 0.0 : std::exp((-th - 1.0) * a[i] + (-1.0 / th - 1.0) * std::log1p(s));
        }
      break;
    }
    case Family::frank: {
      const double e1 = std::expm1(-th);
      for (std::size_t k = 0; k < n; ++k) {
        a[k] = std::expm1(-th * at(k));
        b[k] = std::exp(-th * at(k));
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h[i * n + j] = b[i] * a[j] / (e1 + a[i] * a[j]);
      break;
    }
    case Family::gumbel: {
      if (th == 1.0) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) h[i * n + j] = at(j);
        break;
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double x = -std::log(at(k));
        a[k] = std::pow(x, th);
        b[k] = (th - 1.0) * std::log(x) + x;
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double la = std::log(a[i] + a[j]);
          h[i * n + j] = std::exp(-std::exp(la / th) + (1.0 / th - 1.0) * la + b[i]);
        }
      break;
    }
    case Family::joe: {
      for (std::size_t k = 0; k < n; ++k) {
        a[k] = std::pow(1.0 - at(k), th);
        c[k] = std::pow(1.0 - at(k), th - 1.0);
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double s = a[i] + a[j] - a[i] * a[j];
          h[i * n + j] = std::exp((1.0 / th - 1.0) * std::log(s)) * c[i] * (1.0 - a[j]);
        }
      break;
    }
  }
  return h;
}

}  // namespace

MeasureReport parametric_measures_grid(const ParametricCopula& p, std::size_t n) {
  gridcop::GridCopula g(n, parametric_field(p, n));
  return gridcop::grid_measures(g);
}

}  // namespace xipsi::families
