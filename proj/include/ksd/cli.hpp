#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ksd::cli {

/// Exit codes: 0 success, 1 argument errors, 2 numerical or resource failures.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Runs one subcommand: ksd, gram, test, reweight, generate, wass, experiment.
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace ksd::cli
