#pragma once

#include <iosfwd>

namespace glbfed {

// Full command-line front end, factored out of main() so tests can drive it.
// Returns the process exit code: 0 ok, 2 validation, 3 horizon too short,
// 4 state space too large.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace glbfed
