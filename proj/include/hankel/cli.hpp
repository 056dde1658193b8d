#ifndef HANKEL_CLI_HPP
#define HANKEL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <hankel/types.hpp>

namespace hankel::cli
{

/// Process exit codes.
enum ExitCode : int
{
    exit_ok            = 0,
    exit_usage         = 1,
    exit_not_converged = 2,
    exit_failure       = 3, ///< numerical or I/O failure after valid input
};

/// Parses "4", "1,2,3", "4:28:4" (inclusive start:stop[:step]) and
/// comma-joined mixes of these. Throws ArgumentError on malformed input.
std::vector<Index> parse_index_list(const std::string& text);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace hankel::cli

#endif // HANKEL_CLI_HPP
