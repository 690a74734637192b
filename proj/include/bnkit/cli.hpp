#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnkit {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Runs one command line (args[0] is the program name). Normal output goes to
/// `out`; errors go to `err` as "error: <code>: <message>".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bnkit
