#pragma once
// Command-line entry point. Kept as a library function so tests can drive
// the full argument-to-exit-code path in process.

#include <string>
#include <vector>

namespace semtraj::cli {

// Exit codes: 0 success, 2 input-format error, 3 config/usage error,
// 4 resource ceiling. `args` excludes the program name.
int run(std::vector<std::string> args);

} // namespace semtraj::cli
