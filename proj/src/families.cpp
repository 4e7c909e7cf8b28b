#include "xipsi/families.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xipsi/errors.hpp"

namespace xipsi::families {

using gridcop::Method;

FrechetMixture FrechetMixture::make(double w_pi, double w_m, double w_w) {
  if (!(w_pi >= 0.0 && w_m >= 0.0 && w_w >= 0.0))
    throw DomainError("FrechetMixture: weights must be non-negative");
  if (std::abs(w_pi + w_m + w_w - 1.0) > 1e-12)
    throw DomainError("FrechetMixture: weights must sum to 1");
  return FrechetMixture{w_pi, w_m, w_w};
}

FrechetMixture FrechetMixture::upper(double alpha) { return make(1.0 - alpha, alpha, 0.0); }
FrechetMixture FrechetMixture::lower(double w) { return make(1.0 - w, 0.0, w); }

double frechet_partial(const FrechetMixture& w, double t, double v) {
  return w.w_pi * v + (t <= v ? w.w_m : 0.0) + (t > 1.0 - v ? w.w_w : 0.0);
}

MeasureReport frechet_measures(const FrechetMixture& w, std::size_t grid_n) {
  MeasureReport r;
  if (w.w_m > 0.0 && w.w_w > 0.0) {
    auto g = gridcop::grid_from_partial(
        [&w](double t, double v) { return frechet_partial(w, t, v); }, grid_n);
    r = gridcop::grid_measures(g);
    r.note = "mixture with both M and W weights; evaluated on a grid";
    return r;
  }
  if (w.w_w > 0.0) {
    r.xi = w.w_w * w.w_w;
    r.psi = -0.5 * w.w_w;
  } else {
    r.xi = w.w_m * w.w_m;
    r.psi = w.w_m;
  }
  r.method = Method::exact;
  return r;
}

// ---------------------------------------------------------------------------

OrdinalSumPi::OrdinalSumPi(std::vector<std::pair<double, double>> intervals)
    : iv_(std::move(intervals)) {
  double prev_end = 0.0;
  for (const auto& [a, b] : iv_) {
    if (!(a >= 0.0 && b <= 1.0 && a < b))
      throw DomainError("OrdinalSumPi: each interval needs 0 <= a < b <= 1");
    if (a < prev_end) throw DomainError("OrdinalSumPi: intervals overlap or are not ascending");
    prev_end = b;
  }
}

double ordinal_sum_partial(const OrdinalSumPi& os, double t, double v) {
  for (const auto& [a, b] : os.intervals())
    if (t > a && t < b && v > a && v < b) return (v - a) / (b - a);
  return t <= v ? 1.0 : 0.0;
}

MeasureReport ordinal_sum_measures(const OrdinalSumPi& os) {
  // Outside the squares h is the indicator 1{t <= v}; on a square of side L
  // it is the rescaled Pi slope. Per square:
  //   int h^2       = L^2 / 3   (replacing the indicator's L^2 / 2)
  //   int_{t<=v} h  = L^2 / 3   (replacing L^2 / 2)
  //   diag(C) loses L^2/2 - L^2/3 of the mass of M.
  double sq = 0.0, lin = 0.0;
  for (const auto& [a, b] : os.intervals()) {
    const double len = b - a;
    sq += len * len / 3.0 - len * len / 2.0;
    // int_a^b C(u,u) du = int_a^b (a + (u-a)^2 / L) du versus int_a^b u du
    lin += (a * len + len * len / 3.0) - (b * b - a * a) / 2.0;
  }
  MeasureReport r;
  r.xi = 6.0 * (0.5 + sq) - 2.0;
  r.psi = 6.0 * (0.5 + lin) - 2.0;
  r.method = Method::exact;
  return r;
}

// ---------------------------------------------------------------------------

CheckerboardMatrix::CheckerboardMatrix(std::vector<std::vector<double>> delta) : n_(delta.size()) {
  if (n_ == 0) throw DomainError("CheckerboardMatrix: empty matrix");
  mass_.reserve(n_ * n_);
  for (const auto& row : delta) {
    if (row.size() != n_) throw DomainError("CheckerboardMatrix: matrix must be square");
    for (double x : row) {
      if (!std::isfinite(x) || x < 0.0) throw DomainError("CheckerboardMatrix: entries must be >= 0");
      mass_.push_back(x);
    }
  }
  const double target = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double rs = 0.0, cs = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      rs += mass_[i * n_ + j];
      cs += mass_[j * n_ + i];
    }
    if (std::abs(rs - target) > 1e-9 || std::abs(cs - target) > 1e-9) {
      std::ostringstream os;
      os << "CheckerboardMatrix: row/column " << i << " sums to " << rs << "/" << cs
         << ", expected " << target;
      throw InfeasibleError(os.str());
    }
  }
}

double checkerboard_partial(const CheckerboardMatrix& cb, double t, double v) {
  const std::size_t n = cb.n();
  const auto nn = static_cast<double>(n);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(std::max(t, 0.0) * nn), n - 1);
  const auto j = std::min<std::size_t>(static_cast<std::size_t>(std::max(v, 0.0) * nn), n - 1);
  double below = 0.0;
  for (std::size_t l = 0; l < j; ++l) below += cb(i, l);
  return nn * below + nn * nn * cb(i, j) * (v - static_cast<double>(j) / nn);
}

MeasureReport checkerboard_measures(const CheckerboardMatrix& cb) {
  // On cell (i, j) h = a + b x with x = v - j/n in [0, 1/n], a = n * (mass of
  // row i left of column j) and b = n^2 * delta_ij; h does not depend on t.
  const std::size_t n = cb.n();
  const auto nn = static_cast<double>(n);
  const double w = 1.0 / nn;
  double sq = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double below = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = nn * below;
      const double b = nn * nn * cb(i, j);
      sq += w * (a * a * w + a * b * w * w + b * b * w * w * w / 3.0);
      if (i < j)
        lin += w * (a * w + b * w * w / 2.0);
      else if (i == j)
        lin += a * w * w / 2.0 + b * w * w * w / 3.0;
      below += cb(i, j);
    }
  }
  MeasureReport r;
  r.xi = 6.0 * sq - 2.0;
  r.psi = 6.0 * lin - 2.0;
  r.method = Method::exact;
  return r;
}

CheckerboardMatrix coarsen(const CheckerboardMatrix& cb, std::size_t k) {
  const std::size_t n = cb.n();
  if (k == 0 || n % k != 0) throw DomainError("coarsen: block size must divide n");
  const std::size_t m = n / k;
  std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i / k][j / k] += cb(i, j);
  return CheckerboardMatrix(std::move(out));
}

// ---------------------------------------------------------------------------

CDownMu::CDownMu(double mu_) : mu(mu_), v0(0.0), v1(1.0) {
  if (!(mu >= 0.0 && mu <= 2.0)) throw DomainError("CDownMu: mu must lie in [0, 2]");
  v0 = mu / (2.0 + mu);
  v1 = 2.0 / (2.0 + mu);
}

double cdown_partial(const CDownMu& c, double t, double v) {
  double h1, h2;
  if (v <= c.v0) {
    h1 = 0.0;
    h2 = v / (1.0 - v);
  } else if (v <= c.v1) {
    h1 = v - 0.5 * c.mu * (1.0 - v);
    h2 = v + 0.5 * c.mu * v;
  } else {
    h1 = 2.0 - 1.0 / v;
    h2 = 1.0;
  }
  return t <= v ? h1 : h2;
}

MeasureReport cdown_measures(double mu) {
  const CDownMu c(mu);
  const double v = c.v1;
  MeasureReport r;
  r.psi = -2.0 * v * v + 6.0 * v - 5.0 + 1.0 / v;
  r.xi = -4.0 * v * v + 20.0 * v - 17.0 + 2.0 / v - 1.0 / (v * v) - 12.0 * std::log(v);
  r.method = Method::exact;
  return r;
}

// ---------------------------------------------------------------------------

double EqualityClassCopula::alpha(double v) const {
  const double a = A(v), b = B(v);
  return b > a ? (v - a) / (b - a) : 0.0;
}

double equality_class_partial(const EqualityClassCopula& e, double t, double v) {
  const double a = e.A(v), b = e.B(v);
  if (t < a) return 1.0;
  if (t > a && t < b) return (v - a) / (b - a);
  return 0.0;
}

MeasureReport equality_class_check(const EqualityClassCopula& e, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double v = gridcop::midpoint(j, n);
    const double a = e.A(v), b = e.B(v);
    if (a > b) {
      std::ostringstream os;
      os << "equality class: A(v) > B(v) at v = " << v;
      throw DomainError(os.str());
    }
    if (a > v + 1e-12 || b < v - 1e-12) {
      std::ostringstream os;
      os << "equality class: need A(v) <= v <= B(v), violated at v = " << v;
      throw DomainError(os.str());
    }
  }
  auto g = gridcop::grid_from_partial(
      [&e](double t, double v) { return equality_class_partial(e, t, v); }, n);
  return gridcop::grid_measures(g);
}

}  // namespace xipsi::families
