#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace invh {

/// Exit codes: 0 conclusive, 1 inconclusive, 2 usage or validation error.
enum ExitCode : int { kExitConclusive = 0, kExitInconclusive = 1, kExitUsage = 2 };

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace invh
