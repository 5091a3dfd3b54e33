#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mg1tail::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kUnsupported = 3,
  kIo = 4,
};

/// Runs one command line (without the program name). Never throws; errors become exit codes
/// with a message on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace mg1tail::cli
