#pragma once

#include <string>
#include <vector>

namespace nrs {

// Full command-line driver; `args` excludes the program name.
// Returns the process exit code: 0 on success, 1 for usage errors,
// 2 for I/O failures, 3 for dimension mismatches, 4 for anything else.
int run_cli(const std::vector<std::string>& args);

}  // namespace nrs
