#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rst::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInputError = 2;

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rst::cli
