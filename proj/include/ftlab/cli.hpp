#pragma once

// Command-line front end: expand, verify, check, suite.
//
// Exit codes: 0 success, 1 mathematical discrepancy, 2 usage or parameter
// error.

#include <iosfwd>
#include <string>
#include <vector>

namespace ftlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiscrepancy = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line; argv[0] is the program name.
int run_cli(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err);

} // namespace ftlab
