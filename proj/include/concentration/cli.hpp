#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace conc::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kAssumption = 3,
  kVerificationFailed = 4,
};

/// Runs the command line (args excludes the program name) and returns the
/// exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conc::cli
