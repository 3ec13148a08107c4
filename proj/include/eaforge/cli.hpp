#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eaforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotEquivalent = 2;
inline constexpr int kExitNoEquivalenceFound = 3;

// Runs one command line (args excludes the program name). Results go to
// `out` as JSON lines or T records, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eaforge
