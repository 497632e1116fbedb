// Entry point of the gdalloc command-line tool, kept in a library so tests
// can drive it without spawning processes.

#ifndef GDALLOC_TOOLS_CLI_H_
#define GDALLOC_TOOLS_CLI_H_

#include <ostream>

namespace gdalloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInternal = 4;

inline constexpr unsigned long long kDefaultSeed = 1;

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace gdalloc::cli

#endif  // GDALLOC_TOOLS_CLI_H_
