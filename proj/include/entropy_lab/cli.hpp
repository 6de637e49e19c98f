#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entropy_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the entropy-lab command line. `args` excludes the program name.
/// Tables go to `out` (or to --out PATH), diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.17g, with inf/-inf/nan spelled out.
std::string format_real(double x);

}  // namespace entropy_lab::cli
