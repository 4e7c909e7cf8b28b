#pragma once

// Density images and tables.

#include <functional>
#include <iosfwd>
#include <json.hpp>

#include "xipsi/optimize.hpp"

namespace xipsi::io {

using optimize::Density;

/// Samples a density function at the n x n cell midpoints.
Density density_from_function(const std::function<double(double u, double v)>& c, std::size_t n);

/// ASCII PGM (P2), 8-bit, u to the right and v increasing upward. Density 0
/// maps to 255 and max(c) to 0.
void write_pgm(std::ostream& os, const Density& d);

/// Sidecar metadata for a PGM: n, max, clipped.
nlohmann::json pgm_sidecar(const Density& d);

/// Long format with header `u,v,density`.
void write_density_csv(std::ostream& os, const Density& d);

/// Header `iter,objective,feas_residual`.
void write_qp_log(std::ostream& os, const std::vector<optimize::QpLogEntry>& log);

}  // namespace xipsi::io
