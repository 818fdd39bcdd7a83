#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linking::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationError = 1,
  kAssertionFailure = 2,
  kResourceCap = 3,
};

/// Runs the command line `args` (without the program name). Results go to
/// `out` (or to --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "u_cB=0.5" or "u(c|B)=0.5" style utility overrides into
/// (decision, type, value) given the label sets. Throws std::invalid_argument.
struct UtilityOverride {
  std::string decision;
  std::string type;
  double value;
};
UtilityOverride parse_utility_override(const std::string& text,
                                       const std::vector<std::string>& decisions,
                                       const std::vector<std::string>& types);

}  // namespace linking::cli
