#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace adrnet::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kDataError = 3,
  kIoError = 4,
  kConfigError = 5,
  kNumericError = 6,
};

// Maps a library exception to the process exit code.
int exit_code_for(const std::exception& e);

// Runs the adrnet command line (args excludes the program name). Normal output
// goes to `out`, diagnostics and the resolved-config log to `err`. The last
// line written to `out` is a one-line JSON summary.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adrnet::cli
