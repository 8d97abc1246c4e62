#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fbc {

// Parses args (without the program name) and runs one command. Returns the exit status:
// 0 success, 1 mathematical failure, 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fbc
