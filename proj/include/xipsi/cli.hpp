#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xipsi::cli {

enum ExitCode : int { ok = 0, failure = 1, input_error = 2, infeasible = 3, no_convergence = 4 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xipsi::cli
