#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypflow::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNotConverged = 1;
inline constexpr int kRuntimeFailure = 2;
inline constexpr int kRegimeRefused = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypflow::cli
