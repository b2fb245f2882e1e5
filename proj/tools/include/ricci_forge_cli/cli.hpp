#pragma once

#include <string>
#include <vector>

namespace rf::cli {

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2 };

// Runs one subcommand; argv[0] is the program name.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

const char* version();

}  // namespace rf::cli
