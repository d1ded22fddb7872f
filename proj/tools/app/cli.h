#ifndef EPF_TOOLS_CLI_H_
#define EPF_TOOLS_CLI_H_

#include <ostream>

namespace epf::app {

// Exit statuses besides 10 + ErrorCode for library errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitUnexpected = 2;

// Parses the command line and runs one subcommand.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epf::app

#endif  // EPF_TOOLS_CLI_H_
