#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace so42::cli {

/// Exit codes: 0 success / all checks pass, 1 check failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv);

/// Same, with explicit streams; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace so42::cli
