#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wqc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Machine output goes to
/// `out` as JSON lines, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wqc::cli
