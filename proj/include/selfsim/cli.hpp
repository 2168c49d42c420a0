#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace selfsim {

// Runs one subcommand. Exit codes: 0 success, 2 invalid input, 1 internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace selfsim
