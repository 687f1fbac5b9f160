// Command-line front end: one subcommand per detection stage.
#pragma once

namespace botwatch {

// Exit codes: 0 success, 1 usage error, 2 data error.
int run_cli(int argc, const char* const* argv);

}  // namespace botwatch
