#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alphaloss::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "ALPHALOSS_OUT_DIR";

/// Runs one subcommand (gen-data, landscape, certify, ngd, saturation,
/// tilted). `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alphaloss::cli
