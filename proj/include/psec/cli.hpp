#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (`args` excludes the program name). Tables go to
/// `--out` or `out`; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace psec::cli
