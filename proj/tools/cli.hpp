#pragma once

#include <ostream>

namespace robocim::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1,
    kUsageError = 2,
    kIoError = 3,
};

/// Entry point of the `robocim` tool with injectable streams.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace robocim::cli
