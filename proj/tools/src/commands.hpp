// SPDX-License-Identifier: Apache-2.0

#ifndef PLAP_TOOLS_COMMANDS_HPP
#define PLAP_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace plap::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Default output directory when --out is not given.
inline constexpr const char *kOutputDirVariable = "PLAP_OUTPUT_DIR";

// Entry point of the `plap` tool. Summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace plap::cli

#endif  // PLAP_TOOLS_COMMANDS_HPP
