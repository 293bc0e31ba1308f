#pragma once

namespace driftlap {

// Full command-line tool as a callable, so end-to-end tests can drive it
// in-process.  Returns the process exit code: 0 success, 1 verification
// failure, 2 configuration/usage error.
int cli_run(int argc, const char* const* argv);

} // namespace driftlap
