#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mapdist {

/// Runs one `mapdist` invocation. Exit codes: 0 success, 2 input error or bad
/// usage, 3 when a convergence verdict is "diverges" (scriptable).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mapdist
