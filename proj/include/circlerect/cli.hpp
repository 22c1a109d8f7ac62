#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace circlerect {

/// Exit codes of run_cli.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Reports go to the -o
/// file when given, else to `out`; diagnostics and usage go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace circlerect
