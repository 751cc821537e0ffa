#pragma once

#include <string>
#include <vector>

namespace sdps {

// Exit codes: 0 success, 2 invalid input, 3 numerical abort, 4 I/O failure.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // without program name

}  // namespace sdps
