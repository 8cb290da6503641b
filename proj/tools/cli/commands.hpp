#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pairemit::cli {

/// Process exit codes. Stable interface.
enum ExitCode : int {
  kExitOk = 0,
  kExitNumericFailure = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitNoResonance = 4,
  kExitIntegrator = 5,
};

/// Runs `pairemit <args...>` in-process. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pairemit::cli
