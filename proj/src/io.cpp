#include "xipsi/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "xipsi/errors.hpp"

namespace xipsi::io {

Density density_from_function(const std::function<double(double, double)>& c, std::size_t n) {
  if (n == 0) throw DomainError("density_from_function: n must be positive");
  Density d{n, std::vector<double>(n * n), 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double x = c(gridcop::midpoint(i, n), gridcop::midpoint(j, n));
      if (x < 0.0) {
        d.clipped = std::max(d.clipped, -x);
        x = 0.0;
      }
      d.c[i * n + j] = x;
      d.max = std::max(d.max, x);
    }
  return d;
}

void write_pgm(std::ostream& os, const Density& d) {
  const std::size_t n = d.n;
  os << "P2\n" << n << ' ' << n << "\n255\n";
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t j = n - 1 - r;
    for (std::size_t i = 0; i < n; ++i) {
      const double frac = d.max > 0.0 ? d.c[i * n + j] / d.max : 0.0;
      const long px = std::lround(255.0 * (1.0 - std::clamp(frac, 0.0, 1.0)));
      os << px << (i + 1 == n ? '\n' : ' ');
    }
  }
}

nlohmann::json pgm_sidecar(const Density& d) {
  return nlohmann::json{{"n", d.n}, {"max", d.max}, {"clipped", d.clipped}};
}

void write_density_csv(std::ostream& os, const Density& d) {
  os << "u,v,density\n";
  char buf[96];
  for (std::size_t i = 0; i < d.n; ++i)
    for (std::size_t j = 0; j < d.n; ++j) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.15g\n", gridcop::midpoint(i, d.n),
                    gridcop::midpoint(j, d.n), d.c[i * d.n + j]);
      os << buf;
    }
}

void write_qp_log(std::ostream& os, const std::vector<optimize::QpLogEntry>& log) {
  os << "iter,objective,feas_residual\n";
  char buf[96];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.6g\n", e.iter, e.objective, e.feas_residual);
    os << buf;
  }
}

}  // namespace xipsi::io
