#pragma once
// Command-line front end, exposed as a library call so tests can drive the
// exact production code path in-process (same parsing, same output, same
// exit codes) without spawning a binary.

#include <iosfwd>
#include <string>
#include <vector>

namespace ofl {

// Runs one CLI invocation. `args` excludes the program name. All normal
// output goes to `out`, diagnostics to `err`.
//
// Exit codes encode the result class so shell pipelines can branch without
// parsing JSON:
//   0  success (no witness found / no claimed bound violated)
//   1  witness found, or a claimed bound was exceeded (falsification)
//   2  configuration error (unknown names, malformed values, bad ranges)
//   3  numeric failure (quadrature breakdown, infeasible construction)
//   4  evaluation budget exceeded
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace ofl
