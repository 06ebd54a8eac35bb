#ifndef ROTORWP_TOOLS_CLI_APP_HPP
#define ROTORWP_TOOLS_CLI_APP_HPP

namespace rotorwp::cli {

// Exit codes, stable for scripting:
//   0 success, 1 usage error, 2 configuration/validation error,
//   3 data or numerical error, 4 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

int run(int argc, char** argv);

}  // namespace rotorwp::cli

#endif  // ROTORWP_TOOLS_CLI_APP_HPP
