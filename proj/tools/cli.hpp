#pragma once

#include <iosfwd>

namespace padisno::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kNotConverged = 1;
inline constexpr int kUsage = 2;
inline constexpr int kStepGate = 3;
inline constexpr int kIo = 4;
inline constexpr int kData = 5;
inline constexpr int kNumerical = 6;

/// Entry point shared by the executable and the tests.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace padisno::cli
