#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaptooth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line (args excludes the program name). Normal output
/// goes to `out` unless --output names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaptooth::cli
