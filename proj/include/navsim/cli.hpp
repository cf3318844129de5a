#pragma once

#include <iosfwd>

namespace navsim {

/// Entry point of the `navsim` tool. Exit codes: 0 success, 1 runtime
/// failure, 2 usage error.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace navsim
