// SPDX-License-Identifier: MIT
#pragma once

#include <iosfwd>

namespace bqt {

/// Full command-line entry point (argv parsing included), testable in-process.
/// Exit codes: 0 success, 1 verification/protocol failure, 2 usage or config error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace bqt
