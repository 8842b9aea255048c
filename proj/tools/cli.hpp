#pragma once

#include <iosfwd>

namespace locsketch::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kData = 2;

// Runs the locsketch command line with argv[0] as program name. Normal output
// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace locsketch::cli
