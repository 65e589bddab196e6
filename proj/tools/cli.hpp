#pragma once

#include <string>
#include <vector>

namespace sstuq::cli {

/// Exit codes: 0 success, 2 configuration error, 3 numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Runs the command line front end; `args` excludes the program name.
/// Diagnostics go to stderr, nothing is written to stdout except --help text.
int run(const std::vector<std::string>& args);

}  // namespace sstuq::cli
