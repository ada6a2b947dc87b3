#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vesselforge {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,      // bad flags, config file, or parameters
    kExitIo = 2,          // filesystem / codec failure
    kExitIncomplete = 3,  // eval: some files had no counterpart or were unreadable
};

/// Entry point of the `vesselforge` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vesselforge
