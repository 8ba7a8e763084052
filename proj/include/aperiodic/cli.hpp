#pragma once

#include <iosfwd>
#include <string>

namespace aperiodic::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitShape = 3;
inline constexpr int kExitAcceptance = 4;

/// Runs the command line; messages go to out/err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aperiodic::cli
