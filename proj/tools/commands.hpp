#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spgemm::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kVerifyFailed = 2 };

/// Parses argv (argv[0] is the program name) and runs the chosen subcommand.
/// Tables go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload for tests: args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spgemm::cli
