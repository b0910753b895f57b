#pragma once

// The rtm command line: prove, integrate, bounds, curve, table.
//
// Exit codes: 0 success (proof passed), 1 proof or bound failure,
// 2 usage or configuration error.

#include <iosfwd>
#include <string>
#include <vector>

namespace rtm {

/// args excludes the program name. Every subcommand accepts
/// --config FILE.json whose keys mirror that subcommand's flags; flags given
/// on the command line win.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rtm
