#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steinhull {

/// Runs one subcommand (blocks | simulate | estimate | penalty | verify-hull |
/// oracle-ratio | check). args[0] is the program name. Returns the exit status.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steinhull
