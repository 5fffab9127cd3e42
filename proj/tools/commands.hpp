#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bsa::app {

/// Exit codes shared by every command.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitInput = 2,
    kExitCapacity = 3,
    kExitVerification = 4,
    kExitDegenerate = 5,
};

/// Environment variable holding the default worker count.
inline constexpr const char* kWorkersEnv = "BSA_WORKERS";

/// Runs one command line (without the program name). Reports go to `out` (or to --output),
/// diagnostics to `err`. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bsa::app
