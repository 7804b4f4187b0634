#pragma once

#include <string>
#include <vector>

namespace infmax {

// exit codes: 0 success, 1 validation failure, 2 usage error
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace infmax
