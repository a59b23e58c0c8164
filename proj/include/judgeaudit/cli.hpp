#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace judgeaudit {

// Runs one CLI invocation. args excludes the program name. stdout carries
// only report content; diagnostics go to err. Returns the process exit code
// (0 success, 2 usage, then one code per error family).
int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
             std::ostream& err = std::cerr);

} // namespace judgeaudit
