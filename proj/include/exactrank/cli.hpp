#pragma once

#include <iosfwd>

namespace exactrank {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitCapExceeded = 3;

/// Entry point of the `exactrank` tool: subcommands test, pmf and mixture.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace exactrank
