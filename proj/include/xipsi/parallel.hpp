#pragma once

// Static-partition parallel loop. Each index is handled by exactly one
// thread, so callers that write per-index results and reduce them serially
// afterwards get bit-identical output for any thread count.

#include <cstddef>
#include <functional>

namespace xipsi::parallel {

/// 0 selects XIPSI_THREADS from the environment, else the hardware count.
void set_num_threads(std::size_t n);
std::size_t num_threads();

/// Runs fn(i) for i in [0, count). An exception from any index is rethrown
/// after all workers finish; the one from the lowest chunk wins.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace xipsi::parallel
