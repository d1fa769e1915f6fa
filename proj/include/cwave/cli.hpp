#pragma once

#include <ostream>

namespace cwave {

/// Exit codes: 0 success, 1 validation or usage error, 2 instability.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cwave
