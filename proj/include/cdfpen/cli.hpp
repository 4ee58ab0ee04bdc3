#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cdfpen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/**
 * Entry point for the `cdfpen` tool. Subcommands: fit, simulate,
 * penalty-table, prox-check. Diagnostics go to `err`; tables written to
 * stdout go to `out`. Returns the process exit code.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdfpen::cli
