#pragma once

#include <iosfwd>

#include "mft/errors.hpp"

namespace mft::cli {

enum ExitCode : int {
    kSuccess = 0,
    kNumericalFailure = 1,
    kUsage = 2,
    kConfigError = 3,
    kRegularityViolation = 4,
};

int exit_code_for(ErrorCode code);

// Entry point of the mft command line tool; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mft::cli
