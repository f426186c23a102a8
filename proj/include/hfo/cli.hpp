#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hfo {

/// Exit codes of the hfo command.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitExternal = 4,
  kExitLeakage = 5,
};

/// Entry point of the hfo command. `args` excludes the program name.
/// Never throws; errors are reported on `err` and mapped to an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hfo
