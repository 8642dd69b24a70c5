#pragma once

#include <iosfwd>

namespace bqr::cli {

/// Entry point of the `bqr` command; returns the process exit code
/// (0 success, 2 validation failure, 3 numerical failure).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bqr::cli
