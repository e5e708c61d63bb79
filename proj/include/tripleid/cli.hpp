#pragma once

#include <iosfwd>

namespace tripleid {

/// Exit statuses shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,
  kExitIo = 2,
  kExitDataset = 3,
  kExitLimit = 4,
};

/// Entry point of the `tripleid` tool. Results go to `out`, diagnostics and
/// timings to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tripleid
