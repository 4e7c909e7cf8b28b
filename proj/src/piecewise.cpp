#include <algorithm>
#include <cmath>

#include "xipsi/errors.hpp"
#include "xipsi/numerics.hpp"

namespace xipsi::numerics {

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints, std::vector<Coeffs> coeffs)
    : breaks_(std::move(breakpoints)), coeffs_(std::move(coeffs)) {
  if (breaks_.size() < 2 || coeffs_.size() + 1 != breaks_.size())
    throw DomainError("PiecewisePoly: need k+1 breakpoints for k pieces");
  for (std::size_t k = 0; k + 1 < breaks_.size(); ++k)
    if (!(breaks_[k] < breaks_[k + 1]))
      throw DomainError("PiecewisePoly: breakpoints must be strictly ascending");
}

PiecewisePoly PiecewisePoly::constant(double c, double lo, double hi) {
  return PiecewisePoly({lo, hi}, {Coeffs{c, 0.0, 0.0, 0.0}});
}

std::size_t PiecewisePoly::piece_of(double x) const {
  const auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, x);
  return static_cast<std::size_t>(it - (breaks_.begin() + 1));
}

double PiecewisePoly::operator()(double x) const {
  const std::size_t k = piece_of(x);
  return eval_local(coeffs_[k], x - breaks_[k]);
}

double PiecewisePoly::left_limit(double x) const {
  auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end() - 1, x);
  const auto k = static_cast<std::size_t>(it - (breaks_.begin() + 1));
  return eval_local(coeffs_[k], x - breaks_[k]);
}

PiecewisePoly PiecewisePoly::antiderivative() const {
  std::vector<Coeffs> out(coeffs_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const Coeffs& c = coeffs_[k];
    if (c[3] != 0.0) throw DomainError("PiecewisePoly::antiderivative: degree would exceed 3");
    out[k] = Coeffs{acc, c[0], c[1] / 2.0, c[2] / 3.0};
    acc = eval_local(out[k], breaks_[k + 1] - breaks_[k]);
  }
  return PiecewisePoly(breaks_, std::move(out));
}

double PiecewisePoly::integral() const {
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const Coeffs& c = coeffs_[k];
    const double w = breaks_[k + 1] - breaks_[k];
    acc += w * (c[0] + w * (c[1] / 2.0 + w * (c[2] / 3.0 + w * c[3] / 4.0)));
  }
  return acc;
}

double PiecewisePoly::max_jump() const {
  double jump = 0.0;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    const double left = eval_local(coeffs_[k - 1], breaks_[k] - breaks_[k - 1]);
    jump = std::max(jump, std::abs(coeffs_[k][0] - left));
  }
  return jump;
}

}  // namespace xipsi::numerics
