#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evm {

/// Entry point of the `evm` tool. `args` excludes the program name. Returns the exit code:
/// 0 success, 1 domain error, 2 usage, file or parse error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evm
