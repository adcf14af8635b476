#ifndef QES_TOOLS_CLI_HPP
#define QES_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace qes::cli {

/// Exit codes of the `qes` tool.
enum ExitCode : int
{
    Success = 0,
    UsageError = 1,
    ConstraintError = 2,
    VerificationFailed = 3,
};

/// Runs one `qes` invocation. `args` excludes the program name. Reports go to
/// `out` (or to the file named by --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qes::cli

#endif
