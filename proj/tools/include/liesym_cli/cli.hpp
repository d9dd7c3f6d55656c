#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace liesym::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsageError = 2 };

// Runs the command line `args` (without the program name), writing the
// report to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liesym::cli
