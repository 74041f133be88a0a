#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ncsync::cli {

/// Parses argv and runs one subcommand (simulate, sweep, fixtures).
/// Returns 0 on success, 2 on argument or input errors, 1 on other failures.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncsync::cli
