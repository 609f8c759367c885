#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsf::cli {

// Exit codes of the dsframes tool.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,        // I/O and other runtime errors
    kUsage = 2,          // unknown subcommand, missing or extra arguments
    kInvalidParams = 3,  // arguments parse but are rejected by the library
    kNotConverged = 4,   // solver hit its iteration limit; partial result emitted
};

// Runs one invocation. args excludes the program name. Reports go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsf::cli
