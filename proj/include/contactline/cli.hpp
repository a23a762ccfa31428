#pragma once

#include <iosfwd>

namespace contactline::cli {

/// Runs the command line `argv` and returns the process exit code:
/// 0 on success, 1 on computational failure (error name on `err`),
/// 2 on argument errors (offending flag named on `err`).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace contactline::cli
