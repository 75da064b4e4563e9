#pragma once

#include <iosfwd>

namespace llb::cli {

enum ExitCode : int {
  ok = 0,
  config_error = 1,
  solver_failure = 2,
  verification_failed = 3,
};

/// Entry point of the `llb` tool. Diagnostics go to `err`, progress and results to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace llb::cli
