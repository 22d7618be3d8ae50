#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rhfluid::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kFailure = 2 };

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rhfluid::cli
