#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace needle {

/// Entry point of the needlekit tool, callable in-process (tests drive it
/// directly). `args` excludes the program name. Returns the exit code:
/// 0 success, 1 runtime/I-O failure, 2 usage or configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace needle
