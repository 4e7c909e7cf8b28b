#include <doctest.h>

#include <cmath>
#include <random>

#include "xipsi/errors.hpp"
#include "xipsi/families.hpp"
#include "xipsi/numerics.hpp"

using namespace xipsi;
using namespace xipsi::families;

namespace {

// xi and psi of the C_mu family straight from its partial derivative:
// xi = 6 int (v h1^2 + (1 - v) h2^2) dv - 2, psi = 6 int v h1 dv - 2.
std::pair<double, double> cdown_by_quadrature(double mu) {
  const CDownMu c(mu);
  const double cuts[] = {c.v0, c.v1};
  auto h1 = [&](double v) { return cdown_partial(c, 0.0, v); };
  auto h2 = [&](double v) { return cdown_partial(c, 1.0, v); };
  const double sq = numerics::integrate_piecewise(
      [&](double v) { return v * h1(v) * h1(v) + (1 - v) * h2(v) * h2(v); }, 0.0, 1.0, cuts, 1e-13);
  const double lin =
      numerics::integrate_piecewise([&](double v) { return v * h1(v); }, 0.0, 1.0, cuts, 1e-13);
  return {6 * sq - 2, 6 * lin - 2};
}

// Sinkhorn scaling of a random positive matrix to row and column sums 1/n.
CheckerboardMatrix random_checkerboard(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (auto& r : m)
    for (auto& x : r) x = 0.01 + std::pow(U(rng), 3.0);
  for (int it = 0; it < 5000; ++it) {
    for (auto& r : m) {
      double s = 0;
      for (double x : r) s += x;
      for (double& x : r) x /= s * n;
    }
    double worst = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += m[i][j];
      worst = std::max(worst, std::abs(s - 1.0 / n));
      for (std::size_t i = 0; i < n; ++i) m[i][j] /= s * n;
    }
    if (worst < 1e-15) break;
  }
  return CheckerboardMatrix(m);
}

// Finite-difference derivative of the CDF in u.
double fd_partial(const ParametricCopula& p, double t, double v) {
  const double e = 1e-5;
  return (parametric_cdf(p, t + e, v) - parametric_cdf(p, t - e, v)) / (2 * e);
}

gridcop::MeasureReport grid_of(const gridcop::PartialFn& h, std::size_t n) {
  return gridcop::grid_measures(gridcop::grid_from_partial(h, n));
}

}  // namespace

TEST_CASE("frechet partial and measures") {
  CHECK(frechet_partial(FrechetMixture::make(0.5, 0.5, 0), 0.2, 0.5) == doctest::Approx(0.75));
  CHECK(frechet_partial(FrechetMixture::make(1, 0, 0), 0.33, 0.71) == doctest::Approx(0.71));
  CHECK(frechet_partial(FrechetMixture::make(0.75, 0, 0.25), 0.9, 0.5) == doctest::Approx(0.625));
  CHECK_THROWS_AS(FrechetMixture::make(0.5, 0.6, 0), DomainError);
  CHECK_THROWS_AS(FrechetMixture::make(1.2, -0.2, 0), DomainError);

  auto up = frechet_measures(FrechetMixture::upper(0.5));
  CHECK(up.xi == 0.25);
  CHECK(up.psi == 0.5);
  CHECK(up.method == gridcop::Method::exact);
  auto lo = frechet_measures(FrechetMixture::lower(0.25));
  CHECK(lo.xi == 0.0625);
  CHECK(lo.psi == -0.125);
  auto zero = frechet_measures(FrechetMixture::upper(0.0));
  CHECK(zero.xi == 0.0);
  CHECK(zero.psi == 0.0);

  auto mixed = frechet_measures(FrechetMixture::make(0.5, 0.25, 0.25), 200);
  CHECK(mixed.method == gridcop::Method::grid);
  CHECK_FALSE(mixed.note.empty());
}

TEST_CASE("frechet closed forms agree with grids") {
  for (int k = 1; k <= 9; ++k) {
    const double a = k / 10.0;
    for (const auto& w : {FrechetMixture::upper(a), FrechetMixture::lower(a)}) {
      const auto exact = frechet_measures(w);
      const auto g = grid_of([&](double t, double v) { return frechet_partial(w, t, v); }, 800);
      CHECK(std::abs(exact.xi - g.xi) <= 5e-3);
      CHECK(std::abs(exact.psi - g.psi) <= 5e-3);
    }
  }
}

TEST_CASE("ordinal sums of Pi") {
  const OrdinalSumPi full({{0.0, 1.0}});
  auto r = ordinal_sum_measures(full);
  CHECK(std::abs(r.xi) < 1e-15);
  CHECK(std::abs(r.psi) < 1e-15);
  CHECK(ordinal_sum_partial(full, 0.3, 0.7) == doctest::Approx(0.7));
  r = ordinal_sum_measures(OrdinalSumPi({}));
  CHECK(r.xi == 1.0);
  CHECK(r.psi == 1.0);

  const OrdinalSumPi half({{0.0, 0.5}});
  r = ordinal_sum_measures(half);
  CHECK(r.xi == doctest::Approx(0.75));
  CHECK(r.xi == doctest::Approx(r.psi).epsilon(1e-14));
  const auto g = grid_of([&](double t, double v) { return ordinal_sum_partial(half, t, v); }, 1000);
  CHECK(std::abs(g.xi - r.xi) <= 5e-3);
  CHECK(std::abs(g.psi - r.psi) <= 5e-3);

  const OrdinalSumPi three({{0.05, 0.2}, {0.3, 0.31}, {0.5, 0.95}});
  r = ordinal_sum_measures(three);
  const double sumsq = 0.15 * 0.15 + 0.01 * 0.01 + 0.45 * 0.45;
  CHECK(r.xi == doctest::Approx(1 - sumsq).epsilon(1e-14));
  CHECK(r.psi == doctest::Approx(1 - sumsq).epsilon(1e-14));
  const auto g3 = grid_of([&](double t, double v) { return ordinal_sum_partial(three, t, v); }, 1000);
  CHECK(std::abs(g3.xi - r.xi) <= 5e-3);
  CHECK(std::abs(g3.psi - r.psi) <= 5e-3);

  CHECK_THROWS_AS(OrdinalSumPi({{0.2, 0.5}, {0.4, 0.6}}), DomainError);
  CHECK_THROWS_AS(OrdinalSumPi({{0.5, 0.5}}), DomainError);
}

TEST_CASE("checkerboard exact measures") {
  auto r = checkerboard_measures(CheckerboardMatrix({{0, 0.5}, {0.5, 0}}));
  CHECK(r.xi == 0.5);
  CHECK(r.psi == -0.5);
  r = checkerboard_measures(CheckerboardMatrix({{4.0 / 12, 0, 0}, {0, 1.0 / 12, 3.0 / 12}, {0, 3.0 / 12, 1.0 / 12}}));
  CHECK(std::abs(r.xi - 0.5) < 1e-12);
  CHECK(std::abs(r.psi - 1.0 / 3.0) < 1e-12);
  const std::size_t n = 5;
  r = checkerboard_measures(CheckerboardMatrix(std::vector<std::vector<double>>(n, std::vector<double>(n, 1.0 / 25))));
  CHECK(std::abs(r.xi) < 1e-14);
  CHECK(std::abs(r.psi) < 1e-14);
  CHECK_THROWS_AS(CheckerboardMatrix({{0.5, 0.5}, {0, 0}}), InfeasibleError);
  CHECK_THROWS_AS(CheckerboardMatrix({{-0.1, 0.6}, {0.6, -0.1}}), DomainError);
}

TEST_CASE("checkerboard measures agree with fine grids of their partial") {
  std::mt19937_64 rng(99);
  for (std::size_t n : {2u, 3u, 6u}) {
    const auto cb = random_checkerboard(rng, n);
    const auto exact = checkerboard_measures(cb);
    const auto g = grid_of([&](double t, double v) { return checkerboard_partial(cb, t, v); }, 1200);
    CHECK(std::abs(exact.xi - g.xi) < 2e-3);
    CHECK(std::abs(exact.psi - g.psi) < 2e-3);
  }
}

TEST_CASE("two-by-two checkerboards reach psi = -1/2 only at the anti-diagonal") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 0.5);
  for (int rep = 0; rep < 1000; ++rep) {
    const double a = rep == 0 ? 0.0 : U(rng);
    const auto r = checkerboard_measures(CheckerboardMatrix({{a, 0.5 - a}, {0.5 - a, a}}));
    CHECK(r.psi >= -0.5 - 1e-15);
    if (a > 1e-9) CHECK(r.psi > -0.5);
    if (r.psi <= -0.5 + 1e-15) CHECK(r.xi == doctest::Approx(0.5));
  }
}

TEST_CASE("off-diagonal checkerboards never beat C_#") {
  // Fine checkerboards carrying all mass on the two off-diagonal quadrants
  // have psi = -1/2 and coarsen to C_#, whose xi is 1/2.
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t k = 2 + rep % 3, n = 2 * k;
    const auto a = random_checkerboard(rng, k), b = random_checkerboard(rng, k);
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        m[i][k + j] = 0.5 * a(i, j);
        m[k + i][j] = 0.5 * b(i, j);
      }
    const CheckerboardMatrix cb(m);
    const auto coarse = coarsen(cb, k);
    CHECK(coarse(0, 1) == doctest::Approx(0.5));
    const auto fine = checkerboard_measures(cb);
    CHECK(fine.psi == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fine.xi >= checkerboard_measures(coarse).xi - 1e-12);
  }
  CHECK_THROWS_AS(coarsen(CheckerboardMatrix({{0.5, 0}, {0, 0.5}}), 3), DomainError);
}

TEST_CASE("block coarsening can raise xi in general") {
  // Coarsening averages h over t but also linearises it in v; the second step
  // may increase the L2 norm. Reference values from an independent evaluation.
  const CheckerboardMatrix cb({{0.039230452848773842, 0.0027103486146051385, 0.081325119187271103, 0.1267340793493496},
                               {0.046611787085486224, 0.0032558307621445817, 0.12404005012345833, 0.076092332028910567},
                               {0.057414467830971587, 0.15974562934099876, 0.026715569034661272, 0.0061243337933688125},
                               {0.10674329223476836, 0.084288191282251512, 0.01791926165460932, 0.041049254828371011}});
  CHECK(checkerboard_measures(cb).xi == doctest::Approx(0.18159021813432918).epsilon(1e-12));
  CHECK(checkerboard_measures(coarsen(cb, 2)).xi == doctest::Approx(0.2001966096070502).epsilon(1e-12));
}

TEST_CASE("C_mu partial and closed forms") {
  const CDownMu c2(2.0);
  CHECK(c2.v0 == 0.5);
  CHECK(cdown_partial(c2, 0.1, 0.25) == 0.0);
  CHECK(cdown_partial(c2, 0.9, 0.25) == doctest::Approx(1.0 / 3.0));
  const CDownMu c0(0.0);
  for (double t : {0.1, 0.5, 0.9})
    for (double v : {0.2, 0.6}) CHECK(cdown_partial(c0, t, v) == doctest::Approx(v));
  CHECK_THROWS_AS(CDownMu(2.5), DomainError);
  CHECK_THROWS_AS(CDownMu(-0.1), DomainError);

  auto r = cdown_measures(0.0);
  CHECK(std::abs(r.xi) < 1e-14);
  CHECK(std::abs(r.psi) < 1e-14);
  r = cdown_measures(2.0);
  CHECK(std::abs(r.psi + 0.5) < 1e-14);
  CHECK(std::abs(r.xi - (12 * std::log(2.0) - 8)) < 1e-14);
  r = cdown_measures(1.0);
  CHECK(std::abs(r.psi + 7.0 / 18.0) < 1e-14);
  CHECK(std::abs(r.xi - 0.171138) < 2e-6);
  for (double mu : {0.3, 1.0, 1.646, 2.0}) {
    const auto [xi, psi] = cdown_by_quadrature(mu);
    const auto cf = cdown_measures(mu);
    CHECK(std::abs(cf.xi - xi) < 1e-11);
    CHECK(std::abs(cf.psi - psi) < 1e-11);
  }
}

TEST_CASE("C_mu monotone along mu and reproduced by grids") {
  double prev_xi = -1, prev_psi = 1;
  for (int k = 0; k <= 200; ++k) {
    const auto r = cdown_measures(2.0 * k / 200);
    CHECK(r.xi > prev_xi);
    CHECK(r.psi < prev_psi);
    prev_xi = r.xi;
    prev_psi = r.psi;
  }
  for (double mu : {0.5, 1.0, 1.5, 2.0}) {
    const CDownMu c(mu);
    const auto g = grid_of([&](double t, double v) { return cdown_partial(c, t, v); }, 1000);
    const auto cf = cdown_measures(mu);
    CHECK(std::abs(g.xi - cf.xi) <= 5e-3);
    CHECK(std::abs(g.psi - cf.psi) <= 5e-3);
  }
}

TEST_CASE("equality class") {
  const EqualityClassCopula m{[](double v) { return v; }, [](double v) { return v; }};
  auto r = equality_class_check(m, 200);
  CHECK(std::abs(r.xi - 1.0) <= 6.0 / 200);
  CHECK(std::abs(r.xi - r.psi) <= 6.0 / 200);
  const EqualityClassCopula pi{[](double) { return 0.0; }, [](double) { return 1.0; }};
  CHECK(pi.alpha(0.3) == doctest::Approx(0.3));
  r = equality_class_check(pi, 200);
  CHECK(std::abs(r.xi) <= 6.0 / 200);
  CHECK(std::abs(r.psi) <= 6.0 / 200);
  const EqualityClassCopula mid{[](double v) { return v / 2; }, [](double v) { return (v + 1) / 2; }};
  CHECK(mid.alpha(0.4) == doctest::Approx(0.4));
  r = equality_class_check(mid, 500);
  CHECK(std::abs(r.xi - r.psi) <= 0.012);
  const auto g = gridcop::grid_from_partial(
      [&](double t, double v) { return equality_class_partial(mid, t, v); }, 300);
  CHECK(gridcop::is_si(g));

  const EqualityClassCopula bad{[](double v) { return v; }, [](double v) { return v / 2; }};
  CHECK_THROWS_AS(equality_class_check(bad, 50), DomainError);
}

TEST_CASE("parametric ranges") {
  CHECK_THROWS_AS(ParametricCopula(Family::gaussian, 1.0), DomainError);
  CHECK_THROWS_AS(ParametricCopula(Family::clayton, 0.0), DomainError);
  CHECK_THROWS_AS(ParametricCopula(Family::clayton, -1.0), DomainError);
  CHECK_THROWS_AS(ParametricCopula(Family::frank, 0.0), DomainError);
  CHECK_THROWS_AS(ParametricCopula(Family::gumbel, 0.99), DomainError);
  CHECK_THROWS_AS(ParametricCopula(Family::joe, 0.5), DomainError);
  CHECK_NOTHROW(ParametricCopula(Family::gumbel, 1.0));
  CHECK(family_from_string("gumbel_hougaard") == Family::gumbel);
  CHECK_THROWS_AS(family_from_string("t"), DomainError);
}

TEST_CASE("parametric partials: limits and closed forms") {
  CHECK(parametric_partial(ParametricCopula(Family::gaussian, 0.0), 0.3, 0.7) == 0.7);
  CHECK(std::abs(parametric_partial(ParametricCopula(Family::clayton, 1e-9), 0.3, 0.7) - 0.7) < 1e-6);
  CHECK(std::abs(parametric_partial(ParametricCopula(Family::frank, 1e-9), 0.3, 0.7) - 0.7) < 1e-6);
  CHECK(parametric_partial(ParametricCopula(Family::gumbel, 1.0), 0.3, 0.7) == 0.7);
  CHECK(std::abs(parametric_partial(ParametricCopula(Family::joe, 1.0), 0.3, 0.7) - 0.7) < 1e-14);
  CHECK_THROWS_AS(parametric_partial(ParametricCopula(Family::joe, 2.0), 0.0, 0.5), DomainError);
}

TEST_CASE("parametric partials match finite differences of the CDF") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(0.02, 0.98);
  const std::vector<ParametricCopula> cops = {
      {Family::clayton, 1.459}, {Family::clayton, -0.384}, {Family::clayton, 4.0},
      {Family::frank, 4.5},     {Family::frank, -2.789},   {Family::gumbel, 1.781},
      {Family::gumbel, 3.0},    {Family::joe, 1.796},      {Family::joe, 3.0},
      {Family::gaussian, 0.614}};
  for (const auto& p : cops) {
    const int points = p.family == Family::gaussian ? 50 : 1000;
    double worst = 0.0;
    for (int k = 0; k < points; ++k) {
      const double t = U(rng), v = U(rng);
      const double h = parametric_partial(p, t, v);
      CHECK((h >= 0.0 && h <= 1.0));
      worst = std::max(worst, std::abs(h - fd_partial(p, t, v)));
    }
    INFO(to_string(p.family), " ", p.theta);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("gaussian closed forms and grids") {
  const auto r = gaussian_measures(0.614);
  CHECK(std::abs(r.xi - 0.225) < 3e-3);
  CHECK(std::abs(r.psi - 0.397) < 3e-3);
  const auto g = parametric_measures_grid(ParametricCopula(Family::gaussian, 0.614), 600);
  CHECK(std::abs(g.xi - 0.225) < 3e-3);
  CHECK(std::abs(g.psi - 0.397) < 3e-3);
  CHECK(gaussian_measures(0.0).xi == doctest::Approx(0.0));
  CHECK_THROWS_AS(gaussian_measures(1.0), DomainError);
}

TEST_CASE("fast parametric grid agrees with the pointwise partial") {
  for (const auto& p : {ParametricCopula(Family::clayton, 2.0), ParametricCopula(Family::frank, -3.0),
                        ParametricCopula(Family::gumbel, 1.5), ParametricCopula(Family::joe, 2.5),
                        ParametricCopula(Family::gaussian, -0.4)}) {
    const auto fast = parametric_measures_grid(p, 120);
    const auto slow = grid_of([&](double t, double v) { return parametric_partial(p, t, v); }, 120);
    CHECK(fast.xi == doctest::Approx(slow.xi).epsilon(1e-12));
    CHECK(fast.psi == doctest::Approx(slow.psi).epsilon(1e-12));
  }
}
