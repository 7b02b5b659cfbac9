#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hestonmle::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kIoError = 3,
    kDismissed = 4,
};

/// Runs one command line (args excludes the program name). Results go to `out`
/// unless --output is given; diagnostics and warnings go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hestonmle::cli
