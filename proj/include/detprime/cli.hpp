#pragma once

// Command-line surface. Subcommands: count, mainterm, poisson-check,
// expsum, error-scan, kr-estimate. Exit codes: 0 success, 2 invalid
// arguments, 1 numeric failure / failed check.

#include <cstdint>
#include <string>
#include <vector>

#include "detprime/counting.hpp"

namespace detprime {

int run_cli(int argc, const char* const* argv);

// Custom weight table: whitespace-separated `n re im` lines with strictly
// ascending n >= 1; missing n are 0. Unparsable/duplicate/non-ascending
// lines raise std::invalid_argument naming the line number. Entries with
// |alpha(n)| > 1 + n trigger a growth warning on stderr.
WeightSequence load_custom_alpha(const std::string& path);

// Grid syntax: "start:stop:xK" (geometric, factor K >= 2) or
// "start:stop:+step" (arithmetic); a bare integer is a singleton grid.
std::vector<int64_t> parse_grid(const std::string& text);

}  // namespace detprime
