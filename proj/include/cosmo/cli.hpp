#ifndef COSMO_CLI_HPP
#define COSMO_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cosmo::cli {

/// Dispatches one command invocation. args excludes the program name.
/// Exit codes: 0 success; 1 parse or validation findings at error severity
/// (including inapplicable transformations); 2 usage error; 3 I/O or
/// network failure. stdout carries only payload; diagnostics go to err.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace cosmo::cli

#endif
