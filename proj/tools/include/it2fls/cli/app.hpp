#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace it2fls::cli {

/// Process exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitData = 3,
  kExitFailedToTrain = 4,       // F2T: non-finite parameters or training outputs
  kExitFailedInterval = 5,      // FPI: finite model with test PICP <= 50
};

/// Runs one command line (without the program name), writing reports to
/// `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace it2fls::cli
