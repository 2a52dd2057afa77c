#ifndef HOFA_CLI_H_
#define HOFA_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace hofa {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitMalformed = 65;
inline constexpr int kExitBudget = 66;
inline constexpr int kExitInternal = 70;

// Runs one command. `args` excludes the program name. Reports go to --out or
// `out`; diagnostics (JSON) go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace hofa

#endif  // HOFA_CLI_H_
