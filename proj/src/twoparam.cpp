#include "xipsi/twoparam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xipsi/errors.hpp"

namespace xipsi::twoparam {

using Coeffs = PiecewisePoly::Coeffs;

namespace {

// Collects pieces and drops the empty ones that appear at alpha = 0,
// beta = 0 or beta = 1/2.
class PieceBuilder {
public:
  void add(double lo, double hi, Coeffs c) {
    if (!(hi > lo)) return;
    if (breaks_.empty()) breaks_.push_back(lo);
    breaks_.push_back(hi);
    coeffs_.push_back(c);
  }
  PiecewisePoly finish() { return PiecewisePoly(std::move(breaks_), std::move(coeffs_)); }

private:
  std::vector<double> breaks_;
  std::vector<Coeffs> coeffs_;
};

void require_close(double got, double want, const char* what) {
  if (std::abs(got - want) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "StripCopula: " << what << " = " << got << ", expected " << want;
    throw Error(os.str());
  }
}

}  // namespace

StripCopula StripCopula::build(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha < 0.5)) throw DomainError("StripCopula: alpha must lie in [0, 1/2)");
  if (!(beta >= 0.0 && beta <= 0.5)) throw DomainError("StripCopula: beta must lie in [0, 1/2]");

  StripCopula sc;
  sc.alpha_ = alpha;
  sc.beta_ = beta;
  sc.k_ = (1.0 - beta) / (1.0 - 2.0 * alpha);
  const double k = sc.k_;

  PieceBuilder fl;
  fl.add(0.0, alpha, {0.0, 0.0, 0.0, 0.0});
  fl.add(alpha, 1.0 - alpha, {0.0, k, 0.0, 0.0});
  fl.add(1.0 - alpha, 1.0, {1.0 - beta, 0.0, 0.0, 0.0});
  sc.floor_ = fl.finish();

  // Corner rectangles contribute alpha on [0, beta) and [1 - beta, 1]; the
  // sloped band contributes |[t - beta, t] cap [0, 1 - beta]| / k.
  PieceBuilder L;
  L.add(0.0, beta, {alpha, 1.0 / k, 0.0, 0.0});
  L.add(beta, 1.0 - beta, {beta / k, 0.0, 0.0, 0.0});
  L.add(1.0 - beta, 1.0, {alpha + beta / k, -1.0 / k, 0.0, 0.0});
  sc.L_ = L.finish();
  require_close(sc.L_.integral(), beta, "integral of L");

  std::vector<Coeffs> fc = sc.L_.coeffs();
  for (auto& c : fc) {
    c[0] = (1.0 - c[0]) / (1.0 - beta);
    c[1] = -c[1] / (1.0 - beta);
  }
  sc.fT_ = PiecewisePoly(sc.L_.breakpoints(), std::move(fc));
  const auto& br = sc.fT_.breakpoints();
  for (std::size_t p = 0; p < sc.fT_.pieces(); ++p) {
    if (sc.fT_(br[p]) < -1e-14 || sc.fT_.left_limit(br[p + 1]) < -1e-14)
      throw Error("StripCopula: f_T is negative");
  }
  require_close(sc.fT_.integral(), 1.0, "integral of f_T");
  sc.FT_ = sc.fT_.antiderivative();
  require_close(sc.FT_(1.0), 1.0, "F_T(1)");
  return sc;
}

bool StripCopula::in_H(double s, double t) const {
  const double f = floor_(s);
  return f <= t && t <= f + beta_;
}

double StripCopula::quantile(double v) const {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  const auto& br = FT_.breakpoints();
  const auto& cs = FT_.coeffs();
  std::size_t p = 0;
  while (p + 1 < cs.size() && cs[p + 1][0] <= v) ++p;
  // F_T(b_p + x) = c0 + c1 x + c2 x^2 with c1 = f_T(b_p) > 0.
  const double d = v - cs[p][0];
  const double c1 = cs[p][1], c2 = cs[p][2];
  const double disc = std::max(0.0, c1 * c1 + 4.0 * c2 * d);
  const double denom = c1 + std::sqrt(disc);
  double x = denom > 0.0 ? 2.0 * d / denom : 0.0;
  x = std::clamp(x, 0.0, br[p + 1] - br[p]);
  return br[p] + x;
}

double StripCopula::density(double u, double v) const {
  const double t = quantile(v);
  if (in_H(u, t)) return 0.0;
  const double f = fT_(t);
  if (f <= 0.0) return 0.0;
  return 1.0 / ((1.0 - beta_) * f);
}

namespace {

double conditional(double t, double fl, double beta) {
  return (t - std::clamp(t - fl, 0.0, beta)) / (1.0 - beta);
}

}  // namespace

double StripCopula::partial(double u, double v) const {
  if (beta_ == 0.0) return v;
  return conditional(quantile(v), floor_(u), beta_);
}

MeasureReport StripCopula::measures(double tol) const {
  if (!(tol > 0.0)) throw DomainError("StripCopula::measures: tol must be positive");
  MeasureReport r;
  r.method = gridcop::Method::quadrature;
  r.n_or_tol = tol;
  if (beta_ == 0.0) return r;

  const double a = alpha_, b = beta_, k = k_;
  auto inv_floor = [&](double y) { return a + y / k; };

  // u -> h(u, F_T(t)) is linear between the cuts, so one Simpson panel per
  // piece integrates h and h^2 exactly.
  auto inner = [&](double t, double upper, bool squared) {
    double cuts[4] = {a, 1.0 - a, 0.0, 0.0};
    std::size_t m = 2;
    if (t - b > 0.0 && t - b < 1.0 - b) cuts[m++] = inv_floor(t - b);
    if (t > 0.0 && t < 1.0 - b) cuts[m++] = inv_floor(t);
    std::sort(cuts, cuts + m);
    double acc = 0.0, lo = 0.0;
    auto g = [&](double u) {
      const double h = conditional(t, floor_(u), b);
      return squared ? h * h : h;
    };
    auto panel = [&](double x0, double x1) {
      if (x1 <= x0) return;
      acc += (x1 - x0) / 6.0 * (g(x0) + 4.0 * g(0.5 * (x0 + x1)) + g(x1));
    };
    for (std::size_t c = 0; c < m; ++c) {
      const double hi = std::min(cuts[c], upper);
      if (hi > lo) {
        panel(lo, hi);
        lo = hi;
      }
    }
    panel(lo, upper);
    return acc;
  };

  const double outer_cuts[2] = {b, 1.0 - b};
  const double sq = numerics::integrate_piecewise(
      [&](double t) { return fT_(t) * inner(t, 1.0, true); }, 0.0, 1.0, outer_cuts, tol / 12.0);
  const double lin = numerics::integrate_piecewise(
      [&](double t) { return fT_(t) * inner(t, FT_(t), false); }, 0.0, 1.0, outer_cuts, tol / 12.0);
  r.xi = 6.0 * sq - 2.0;
  r.psi = 6.0 * lin - 2.0;
  return r;
}

PathParams path_params(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("path_params: mu must be finite and >= 0");
  PathParams p{mu, 0.0, 0.25 * std::min(mu, 2.0)};
  p.alpha = mu <= 2.0 ? 0.15 * mu : 0.5 - 2.0 / (5.0 * mu);
  return p;
}

StripCopula strip_path(double mu) {
  const PathParams p = path_params(mu);
  return StripCopula::build(p.alpha, p.beta);
}

}  // namespace xipsi::twoparam
