#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ratnorm::cli {

/// Stable exit statuses.
enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kDomain = 3,
  kValidationFailed = 4,
};

inline constexpr unsigned long long kDefaultSeed = 20240917ULL;

/// Runs the command line given by args (args[0] is the program name).
/// Results go to out, diagnostics to err; returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ratnorm::cli
