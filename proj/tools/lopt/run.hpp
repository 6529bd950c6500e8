#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lopt::cli {

enum ExitCode { Ok = 0, Internal = 1, ConfigFailure = 2, NumericalFailure = 3 };

// Runs one experiment. args excludes the program name. Failures print a single
// JSON error record to err and return the matching exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lopt::cli
