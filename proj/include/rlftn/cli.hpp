#pragma once

namespace rlftn {

/// Parses argv and dispatches to the subcommands (run-tebd, bench-compare,
/// factorize, analyze).  Returns the process exit code: 0 on success, 1 on
/// runtime errors or a failed --check, 2 on usage or configuration errors.
int run_cli(int argc, char** argv);

}  // namespace rlftn
