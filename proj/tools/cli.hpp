#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace erlangtail::cli {

enum ExitCode : int { exit_ok = 0, exit_domain = 1, exit_input = 2, exit_numeric = 3 };

/// Runs the command line `args` (without the program name). Output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace erlangtail::cli
