#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace mvlab::cli {

enum ExitCode : int { kHolds = 0, kViolated = 1, kUsage = 2, kNumeric = 3 };

/// Runs one invocation; `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mvlab::cli
