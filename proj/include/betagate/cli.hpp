#pragma once

namespace betagate {

// Entry point shared by the betagate binary and the CLI tests.
// Subcommands: calibrate, simulate, run, score, report.
int cli_main(int argc, const char* const* argv);

}  // namespace betagate
