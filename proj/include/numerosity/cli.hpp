#pragma once

#include <string>
#include <vector>

namespace numerosity {

/// Tool version recorded in run manifests.
inline constexpr const char* kToolVersion = "1.0.0";

/// Entry point of the `numerosity` command-line tool. Returns the exit code:
/// 0 success, 1 I/O, 2 input format, 3 insufficient data, 4 configuration,
/// 5 consistency check below threshold (`compare`).
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace numerosity
