#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kinetic::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInvalidInput = 2 };

/// Runs one invocation. args excludes the program name. Output that the
/// user asked for goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kinetic::cli
