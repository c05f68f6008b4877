#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crnc {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2 };

// args exclude the program name
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace crnc
