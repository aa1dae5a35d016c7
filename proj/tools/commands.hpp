#pragma once

#include <ostream>
#include <span>
#include <string>

namespace steptx::cli {

// Dispatches the full command-line surface. Returns the process exit code:
//   0  success (including --help)
//   1  usage errors: unknown flags, bad values, invalid combinations
//   2  input data errors: unreadable or malformed files, length mismatches
//   3  violated method preconditions (e.g. a source shorter than the target
//      passed to an estimator that requires higher frequency)
int run_cli(std::span<const std::string> args, std::ostream& out,
            std::ostream& err);

// argv wrapper around the span overload, writing to stdout/stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace steptx::cli
