#pragma once

#include <iosfwd>

namespace qcsp::cli {

// Exit codes.
inline constexpr int kPositive = 0;
inline constexpr int kNegative = 1;
inline constexpr int kUsage = 2;
inline constexpr int kInconclusive = 3;

// Runs one command-line invocation, writing to the given streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcsp::cli
