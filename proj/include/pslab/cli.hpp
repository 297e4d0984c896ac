#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pslab::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kValidation = 2;
inline constexpr int kGuard = 3;
inline constexpr int kRouteDisagreement = 4;

/// Parses `args` (without the program name), dispatches, and writes
/// results to `out` (or to --output) and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pslab::cli
