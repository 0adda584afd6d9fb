#pragma once

// The actlogic command-line front end.

#include <iosfwd>
#include <string>
#include <vector>

namespace actlogic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

/// Parses and dispatches one command. `args` excludes the program name.
/// Diagnostics go to `err`; summaries and help go to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace actlogic::cli
