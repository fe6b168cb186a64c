#pragma once

#include <iosfwd>

namespace klmchain::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,  // certification or regression failure
  kUsage = 2,        // bad flags or invalid input
};

/// Parses argv and runs the requested subcommand, writing reports to `out` and
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace klmchain::cli
