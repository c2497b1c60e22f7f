#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace passguess {

/// Exit codes beyond 0/1.
inline constexpr int kExitStoreMissing = 2;
inline constexpr int kExitParseError = 3;

/// Runs the command line with `args` excluding the program name. Errors are
/// written to `err` as a single JSON line.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace passguess
