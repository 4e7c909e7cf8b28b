#pragma once

// JSON descriptors of copulas, e.g. {"family":"frechet","w_pi":0.5,"w_m":0.5}.

#include <json.hpp>

#include "xipsi/gridcop.hpp"

namespace xipsi::descriptor {

struct Options {
  std::size_t grid_n = 400;
  double quad_tol = 1e-6;
};

/// Dispatches on "family". Malformed descriptors raise DomainError and
/// infeasible ones (e.g. a bad checkerboard) raise InfeasibleError.
gridcop::MeasureReport measures(const nlohmann::json& desc, const Options& opt = {});

/// d/du C for descriptors that have one.
gridcop::PartialFn partial(const nlohmann::json& desc);

nlohmann::json to_json(const gridcop::MeasureReport& r);

}  // namespace xipsi::descriptor
