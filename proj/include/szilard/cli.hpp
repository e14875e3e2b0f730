#ifndef SZILARD_CLI_HPP
#define SZILARD_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace szilard::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kBadFlags = 2,
  kInvalidSpec = 3,
  kDomainError = 4,
};

/// Entry point of the `szilard` tool. Primary output goes to `out` unless
/// --out is given; diagnostics and the manifest echo go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "start:stop:step" into an inclusive grid.
std::vector<double> parse_range(const std::string& text);

/// Parses a comma-separated list, or a "start:stop:step" range.
std::vector<double> parse_grid(const std::string& text);

/// Formats a number with 12 significant digits.
std::string format_number(double v);

}  // namespace szilard::cli

#endif  // SZILARD_CLI_HPP
