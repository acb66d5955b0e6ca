#pragma once

#include <iosfwd>

namespace fracstab {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInvalid = 2,
  kExitIo = 3,
};

/// Parses argv and runs one subcommand, writing results to out and
/// diagnostics to err. Returns one of the exit codes above.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracstab
