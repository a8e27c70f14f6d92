#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tw::cli {

/// Exit codes of the experiment runner.
enum ExitCode : int { kSuccess = 0, kUsage = 1, kNumerical = 2, kPrecondition = 3 };

/// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace tw::cli
