#pragma once

#include <ostream>

namespace levy {

/// Command-line entry point: constants, resolvent, simulate, verify.
/// Returns 0 on success, 1 when a tolerance or check fails, 2 on bad input or I/O errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace levy
