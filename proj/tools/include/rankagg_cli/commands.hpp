#pragma once

// Entry point of the rankagg command-line harness.
//
// Exit codes: 0 success, 2 flag errors, 3 data errors, 4 budget errors.

#include <string>
#include <vector>

namespace rankagg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFlags = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitBudget = 4;

/// args[0] is the program name. A `--config FILE` of key=value lines supplies
/// defaults for the subcommand's flags; flags on the command line win.
int run_cli(std::vector<std::string> args);

/// Reads key=value lines, skipping blanks and '#' comments.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

}  // namespace rankagg::cli
