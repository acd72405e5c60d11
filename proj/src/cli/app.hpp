#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace milsent::cli {

/// Parses `args` (without the program name) and runs one subcommand.
/// Exit status: 0 success, 1 runtime or data failure, 2 usage or config error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace milsent::cli
