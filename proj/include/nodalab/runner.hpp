// Batch experiment driver behind the CLI: JSON config in, CSV/JSON/SVG plus a
// run manifest out. Kept in the library so tests can invoke runs in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nodalab {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 internal/usage error, 2 invalid configuration,
// 3 numerical degeneracy (partial outputs plus an error record).
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace nodalab
