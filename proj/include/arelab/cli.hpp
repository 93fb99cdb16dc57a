#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arelab {

/// Command-line entry point. `args` excludes the program name. CSV goes to `out`
/// unless --out names a file; diagnostics go to `err`.
/// Exit codes: 0 success, 1 runtime failure, 2 usage, configuration or parameter error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace arelab
