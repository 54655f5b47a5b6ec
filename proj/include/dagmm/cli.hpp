#pragma once

#include <iosfwd>

namespace dagmm {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,       ///< I/O or parse failure
  kExitGraph = 2,    ///< input is not a valid DAG
  kExitConfig = 3,   ///< invalid flags or configuration
};

/// Entry point behind the `dagmm` binary: clean, stats, fit, summarize,
/// simulate. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dagmm
