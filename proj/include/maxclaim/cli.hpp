#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace maxclaim::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 2,
  kRefuted = 3,
  kHypothesesFailed = 4,
  kUsage = 64,
  kParseError = 65,
  kMissingFile = 66,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maxclaim::cli
