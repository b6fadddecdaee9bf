#pragma once

namespace dualwave::cli {

// Full command-line entry point. Returns the process exit code:
// 0 ok, 2 configuration error, 3 numerical error.
int run_cli(int argc, const char* const* argv);

}  // namespace dualwave::cli
