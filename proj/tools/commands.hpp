#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lprof::cli {

/// Exit codes shared by every subcommand.
enum Exit : int {
    kOk = 0,
    /// Input was read but rejected: non-conformant log, too few eligible
    /// learners, parameters the data cannot satisfy.
    kRejected = 1,
    /// Usage, IO or parse error.
    kError = 2,
};

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lprof::cli
