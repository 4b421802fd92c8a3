#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace supmax::cli {

enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kUsage = 2,
    kInfeasible = 3,
    kNumerical = 4,
};

/// Runs one invocation; `args` excludes the program name. Results go to `out`
/// (or to --out FILE), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flat `key=value` lines, `#` starts a comment. Throws std::runtime_error on
/// malformed lines.
std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in);

} // namespace supmax::cli
