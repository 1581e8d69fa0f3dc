#pragma once

// Command-line harness: converge, run, contour and diagnose commands.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage error.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace jetadv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

/// Parses "1/150", "0.02" or "3"; throws std::invalid_argument.
double parse_fraction(std::string_view text);

/// Comma-separated list of parse_fraction values.
std::vector<double> parse_fraction_list(std::string_view text);

/// Runs one command. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jetadv::cli
