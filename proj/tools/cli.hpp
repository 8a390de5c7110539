#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flaash::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `flaash` tool. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flaash::cli
