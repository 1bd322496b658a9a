#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pm {

// Parses the argument list (program name excluded), runs the requested
// subcommand, and writes its report to out. Returns the process exit code:
// 0 on success (and when every suite property passes), 1 on a computation
// error (a structured error object is emitted) or a failed suite, 2 on a
// usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pm
