#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dracula {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,       // infeasible input or data errors
  kExitNumerical = 3,  // solver failures and failed self-checks
};

/// Runs one command line (args[0] is the program name). Diagnostics go to
/// `err`, human-readable reports to `out`; files are written under --out.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dracula
