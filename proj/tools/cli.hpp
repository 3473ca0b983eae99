#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace treewalk {

/// Entry point of the treewalk command line; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treewalk
