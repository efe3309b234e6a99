#pragma once

namespace tdgl {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_nonconvergence = 2, exit_io = 3 };

// Subcommands: run, sweep, compare, render.
int run_main(int argc, char** argv);

}  // namespace tdgl
