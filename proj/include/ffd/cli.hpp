#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ffd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 usage or parse error, 2 verification failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "sf0:f=1..5" -> sf0:f=1 ... sf0:f=5; other tokens pass through.
std::vector<std::string> expand_criteria(const std::vector<std::string>& tokens);

}  // namespace ffd::cli
