#pragma once

#include <iosfwd>

namespace regretlab {

/// regret_lab entry point. Exit codes: 0 success, 1 usage or validation error,
/// 2 runtime failure.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace regretlab
