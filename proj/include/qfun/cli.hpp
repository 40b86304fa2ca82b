#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfun {

/// Exit codes of `qfun solve`.
inline constexpr int kExitTrue = 10;
inline constexpr int kExitFalse = 20;
inline constexpr int kExitUnknown = 30;
inline constexpr int kExitUsage = 1;

/// Entry point of the qfun tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qfun
