#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lipdisc::cli {

enum ExitCode : int {
  kPass = 0,
  kBoundViolation = 1,
  kInputError = 2,
  kNumericalFailure = 3,
};

// Runs one command. args excludes the program name. JSON goes to `out`
// unless --out is given, in which case `out` gets a short text summary.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lipdisc::cli
