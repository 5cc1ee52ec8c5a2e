#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace karnrto::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

/// Runs the command line `args` (args[0] is the program name) writing to
/// the given streams. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace karnrto::cli
