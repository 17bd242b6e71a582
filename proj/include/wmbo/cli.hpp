#pragma once

#include <string>
#include <vector>

namespace wmbo {

// Exit codes: 0 success, 1 regime or validation failure, 2 usage error.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);  // args exclude the program name

}  // namespace wmbo
