#include "xipsi/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "xipsi/errors.hpp"

namespace xipsi::numerics {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    std::ostringstream os;
    os << "invalid interval [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
}

namespace {

struct SimpsonState {
  const RealFn& f;
  int max_depth;
  double forced_error = 0.0;  // error estimate of leaves accepted at max depth
};

double simpson_recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  if (depth >= st.max_depth) {
    st.forced_error += std::abs(diff) / 15.0;
    return left + right + diff / 15.0;
  }
  return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate_1d(const RealFn& f, Interval iv, double abs_tol, int max_depth) {
  if (!(abs_tol > 0.0)) throw DomainError("integrate_1d: abs_tol must be positive");
  SimpsonState st{f, max_depth};
  const double a = iv.lo, b = iv.hi, m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double result = simpson_recurse(st, a, b, fa, fm, fb, whole, abs_tol, 0);
  if (!std::isfinite(result)) throw ConvergenceError("integrate_1d: non-finite integrand", result, INFINITY);
  if (st.forced_error > abs_tol) {
    std::ostringstream os;
    os << "integrate_1d: tolerance " << abs_tol << " not met at max depth " << max_depth
       << " (achieved " << st.forced_error << ")";
    throw ConvergenceError(os.str(), result, st.forced_error);
  }
  return result;
}

double integrate_piecewise(const RealFn& f, double lo, double hi, std::span<const double> cuts,
                           double abs_tol, int max_depth) {
  std::vector<double> pts{lo};
  for (double c : cuts)
    if (c > lo && c < hi) pts.push_back(c);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  const double span_width = hi - lo;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double w = pts[k + 1] - pts[k];
    if (w <= 0.0) continue;
    total += integrate_1d(f, Interval(pts[k], pts[k + 1]), abs_tol * w / span_width, max_depth);
  }
  return total;
}

double find_root_bracketed(const RealFn& f, Interval iv, double abs_tol) {
  double lo = iv.lo, hi = iv.hi;
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    std::ostringstream os;
    os << "find_root_bracketed: not bracketed on [" << lo << ", " << hi << "] (f = " << flo
       << ", " << fhi << ")";
    throw NotBracketedError(os.str());
  }
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double std_normal_cdf(double x) {
  if (std::isnan(x)) throw DomainError("std_normal_cdf: NaN argument");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0, 1)");
  // Acklam's rational approximation (relative error 1.15e-9), polished below.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the erfc-based CDF.
  for (int it = 0; it < 2; ++it) {
    const double e = std_normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
  }
  return x;
}

namespace {

double clipped_mean(std::span<const double> x, double shift) {
  double s = 0.0;
  for (double xi : x) s += std::clamp(xi + shift, 0.0, 1.0);
  return s / static_cast<double>(x.size());
}

}  // namespace

void project_capped_simplex_inplace(std::span<double> x, double target_mean) {
  if (!(target_mean >= 0.0 && target_mean <= 1.0))
    throw DomainError("project_capped_simplex: target_mean must lie in [0, 1]");
  if (x.empty()) return;
  const auto n = static_cast<double>(x.size());
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  double lo = -*mx;        // everything clips to 0
  double hi = 1.0 - *mn;   // everything clips to 1
  // Bisection on the shift; mean(clip(x + shift)) is non-decreasing in shift.
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (clipped_mean(x, mid) < target_mean)
      lo = mid;
    else
      hi = mid;
  }
  double shift = 0.5 * (lo + hi);
  // Recover the exact shift from the active set found by bisection.
  double fixed = 0.0, free_sum = 0.0;
  int free_count = 0;
  for (double xi : x) {
    const double y = xi + shift;
    if (y <= 0.0) continue;
    if (y >= 1.0) {
      fixed += 1.0;
    } else {
      free_sum += xi;
      ++free_count;
    }
  }
  if (free_count > 0) {
    const double exact = (target_mean * n - fixed - free_sum) / free_count;
    if (std::abs(exact - shift) <= 1e-9) shift = exact;
  }
  for (double& xi : x) xi = std::clamp(xi + shift, 0.0, 1.0);
}

std::vector<double> project_capped_simplex(std::span<const double> x, double target_mean) {
  std::vector<double> y(x.begin(), x.end());
  project_capped_simplex_inplace(y, target_mean);
  return y;
}

namespace {

void pav_inplace(std::span<double> x) {
  const std::size_t n = x.size();
  if (n < 2) return;
  thread_local std::vector<double> sum;
  thread_local std::vector<std::size_t> count;
  sum.resize(n);
  count.resize(n);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum[blocks] = x[i];
    count[blocks] = 1;
    ++blocks;
    while (blocks > 1 && sum[blocks - 2] * static_cast<double>(count[blocks - 1]) >
                             sum[blocks - 1] * static_cast<double>(count[blocks - 2])) {
      sum[blocks - 2] += sum[blocks - 1];
      count[blocks - 2] += count[blocks - 1];
      --blocks;
    }
  }
  std::size_t pos = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double mean = sum[b] / static_cast<double>(count[b]);
    for (std::size_t k = 0; k < count[b]; ++k) x[pos++] = mean;
  }
}

}  // namespace

std::vector<double> isotonic_project(std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  pav_inplace(y);
  return y;
}

void isotonic_box_project_inplace(std::span<double> x, double lo, double hi) {
  pav_inplace(x);
  for (double& v : x) v = std::clamp(v, lo, hi);
}

}  // namespace xipsi::numerics
