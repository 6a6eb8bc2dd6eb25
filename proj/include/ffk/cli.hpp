#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ffk {

// Runs the command-line front end on an argument vector (without argv[0]).
// Returns the process exit code: 0 success, 2 parse error, 3 precondition
// violation, 4 unsupported parameters.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ffk
