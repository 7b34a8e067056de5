#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sinkeq::cli {

/// Exit codes: 0 answered, 2 inconclusive (cap), 1 error.
inline constexpr int kAnswered = 0;
inline constexpr int kError = 1;
inline constexpr int kInconclusive = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sinkeq::cli
