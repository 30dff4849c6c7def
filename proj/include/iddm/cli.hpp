#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iddm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitConvergence = 2;

/// Runs one subcommand. `args` excludes the program name, e.g.
/// {"critical", "--lambda", "5"}. Output files named by --output are written
/// directly; everything else goes to `out` / `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace iddm::cli
