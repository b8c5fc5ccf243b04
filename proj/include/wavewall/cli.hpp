#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wavewall {

/// Entry point of the `wavewall` tool. `args[0]` is the program name.
/// Returns 0 on success, 1 on runtime errors, 2 on usage errors.
int cli_dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace wavewall
