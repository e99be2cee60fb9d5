#ifndef LOEWNER_TOOLS_CLI_H_
#define LOEWNER_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace loewner::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line (without the program name). Results go to `out`
// unless --out is given; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err);

}  // namespace loewner::cli

#endif  // LOEWNER_TOOLS_CLI_H_
