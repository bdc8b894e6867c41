// cli.hpp — the batch front-end. Exit codes: 0 all checks pass, 1 a mathematical
// violation was found, 2 malformed input or a capacity/precondition error.

#pragma once

#include <ostream>

namespace qboltz::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qboltz::cli
