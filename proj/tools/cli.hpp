#pragma once

#include <iosfwd>

namespace neurohome::cli {

// Exit codes: 0 ok, 1 usage error, 2 data or file error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace neurohome::cli
