#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perseval::cli {

// Parses and runs one invocation. Returns the process exit status: 0 on
// success, otherwise the ErrorKind of the failure (1 config, 2 data,
// 3 endpoint, 4 internal).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perseval::cli
