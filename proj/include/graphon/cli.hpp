#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphon {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitSolver = 2,
  kExitRefuted = 3,
  kExitTolerance = 4,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace graphon
