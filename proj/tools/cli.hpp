#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cadyn::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kRefuted = 2;
inline constexpr int kBudget = 3;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cadyn::cli
