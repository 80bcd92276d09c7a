#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace betarisk::cli {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2; // bad flags, invalid configuration, mismatched inputs
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumeric = 4;

// `args[0]` is the program name. Progress goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace betarisk::cli
