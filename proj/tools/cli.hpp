#ifndef SKIPSIM_TOOLS_CLI_HPP
#define SKIPSIM_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace skipsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitIo = 4;

// args excludes the program name
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace skipsim::cli

#endif
