#pragma once

#include <ostream>

namespace spin_atlas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the spin_atlas tool. Results go to `out` unless --output
/// names a file (written atomically); diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spin_atlas::cli
