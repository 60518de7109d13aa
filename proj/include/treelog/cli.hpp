#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace treelog {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitYes = 0, kExitNo = 1, kExitUsage = 2, kExitUnknown = 3 };

/// Runs `treelog` with `args` (without the program name), writing the report
/// to `out` and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treelog
