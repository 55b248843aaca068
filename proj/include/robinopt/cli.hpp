#pragma once

#include <ostream>

namespace robinopt::cli {

/// Exit codes: 0 success, 1 numeric failure or an unsatisfied bound, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace robinopt::cli
