#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace copchase::cli {

/// Process exit codes of the copchase tool.
enum ExitCode : int {
    kSuccess = 0,
    kInternalError = 1,
    kInputError = 2,
    kDisagreement = 3,
    kOracleCap = 4,
    kUnsupportedSimulation = 5,
};

/// Runs the command line `args` (without the program name) and returns the
/// exit code. Regular output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace copchase::cli
