#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sfreject::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNotRejected = 2,
  kInternalError = 3,
};

/// Entry point of the `sfreject` tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfreject::cli
