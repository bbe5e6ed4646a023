#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adhoccap::cli {

/// Exit statuses of dispatch.
inline constexpr int kOk = 0;
inline constexpr int kInfeasible = 1;
inline constexpr int kUsage = 2;

/// Runs one subcommand. `args` excludes the program name. CSV goes to the
/// --out path or to `out`; diagnostics and, when writing to `out`, the run
/// manifest go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adhoccap::cli
