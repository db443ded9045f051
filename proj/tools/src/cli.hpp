#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hotspot::app {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,     ///< bad flags or config, contract violation, unknown image ids
    kExitIo = 2,         ///< missing or malformed input, failed write
    kExitNumerical = 3,  ///< eigensolver failure; message names the tile
    kExitInternal = 4,
};

/// Parses `args` (args[0] is the program name), runs the subcommand and maps
/// exceptions to exit codes. Machine-readable output goes to `out`; logs and
/// error messages go to standard error.
int run_cli(const std::vector<std::string>& args, std::ostream& out);

}  // namespace hotspot::app
