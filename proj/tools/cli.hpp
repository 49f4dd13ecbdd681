#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace drs::cli {

/// Exit codes shared by every command.
enum ExitCode : int { kDefinitive = 0, kInputError = 1, kUndecided = 2 };

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace drs::cli
