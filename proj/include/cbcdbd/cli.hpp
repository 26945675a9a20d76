#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cbcdbd {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitBoundViolation = 3,
  kExitBudget = 4,
};

/// Runs the command line `args` (without the program name); returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cbcdbd
