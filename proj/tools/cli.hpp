#pragma once

#include <iosfwd>

namespace capharm::cli {

/// Version of the --json summary record.
inline constexpr int kSchemaVersion = 1;

/// Runs the command line. Returns the process exit code: 0 on success, the
/// error category (1 config, 2 I/O, 3 topology, 4 convergence, 5 numerical
/// domain) otherwise. Summaries go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace capharm::cli
