#pragma once

#include <iosfwd>

namespace smartlet::tools {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,    // verification mismatch or unexpected error
    kExitBadInput = 2,   // malformed scenario, program, stimulus or waveform
    kExitTraceIo = 3,
    kExitPortBusy = 4,
};

// Entry point shared by the executable and in-process tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smartlet::tools
