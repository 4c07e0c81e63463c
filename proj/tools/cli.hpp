#ifndef QDISCOUNT_TOOLS_CLI_HPP
#define QDISCOUNT_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace qdiscount::cli {

/// Exit codes: 0 success, 1 numerical failure, 2 usage or format error.
enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kUsageError = 2 };

/// Run the command line @p args (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdiscount::cli

#endif  // QDISCOUNT_TOOLS_CLI_HPP
