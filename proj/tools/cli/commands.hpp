#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chainent::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kNumeric = 3,
  kAcceptance = 4,
};

/// Runs the command line `args` (without the program name). Machine-readable
/// output goes to `out` unless --out is given; summaries and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainent::cli
