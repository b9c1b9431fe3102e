#pragma once

#include <string>
#include <vector>

namespace symor::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalError = 3,
  kIoError = 4,
  kGapError = 5,
};

int run(int argc, char** argv);
// args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace symor::cli
