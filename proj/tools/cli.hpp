#pragma once

#include <ostream>

namespace rmdp::cli {

enum ExitCode : int { ok = 0, validation_error = 1, solver_failure = 2, usage_error = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rmdp::cli
