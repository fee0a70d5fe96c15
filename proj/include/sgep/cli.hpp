#pragma once

#include <iosfwd>

namespace sgep::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kSolverPrecondition = 3,
  kBudgetExceeded = 4,
};

/// Entry point of the `sgep` tool: solve, bench, oracle and gen subcommands.
/// Reports go to `out`; failures print a one-line JSON error to `out` and
/// return a nonzero exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgep::cli
