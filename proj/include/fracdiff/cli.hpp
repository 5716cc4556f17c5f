#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracdiff::cli {

/// Exit codes of run().
enum ExitCode : int {
  ok = 0,
  unexpected = 1,   ///< I/O and other failures outside the numerical contract
  validation = 2,   ///< bad flags, config or parameters outside an operation's domain
  convergence = 3,  ///< a numerical method missed its accuracy contract, or verify failed
};

/// Runs one subcommand. args excludes the program name. A one-line JSON
/// summary goes to out; diagnostics and per-stage progress go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracdiff::cli
