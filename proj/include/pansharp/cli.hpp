#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pansharp {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

/// Runs the `pansharp` command line. `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace pansharp
