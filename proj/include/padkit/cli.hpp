#pragma once

#include <ostream>

namespace padkit {

/// Runs one `padkit` command line (argv[0] is the program name) and returns
/// the exit status: 0 on success, 1 usage, 2 data, 3 numeric. On failure a
/// single line `padkit: error: <category>: <Code>: <message>` goes to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace padkit
