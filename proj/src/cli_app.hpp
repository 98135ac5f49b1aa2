#pragma once

namespace fieldcbf::cli {

/// Full command-line interface (run | compare | sweep). Returns the process
/// exit code: 0 success, 2 config error, 3 simulation fault, 4 I/O error.
int run_cli(int argc, const char* const* argv);

}  // namespace fieldcbf::cli
