#pragma once

#include <ostream>

namespace rnc {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitIo = 4,
  kExitProperty = 5,
};

/// Entry point of the `rnc` tool; `out` receives results, `err` diagnostics.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rnc
