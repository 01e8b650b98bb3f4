#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "petro/diagnostics.hpp"

namespace petro::cli {

struct CommandOutcome {
  int exit_code = 0;  // 0 ok, 1 input/validation error, 2 usage error
  std::vector<Diagnostic> diagnostics;
};

// Entry point behind the petro binary. Subcommands: ingest, parse, classify,
// compile, verify, export. Human-readable output goes to `out`, diagnostics
// to `err`. No environment variables, no implicit config files.
CommandOutcome run(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err);

}  // namespace petro::cli
