#pragma once

#include <string>
#include <vector>

namespace hamrep::cli {

/// Exit codes of every subcommand.
enum ExitCode : int {
  kPass = 0,
  kConditionViolated = 2,
  kAuditFailed = 3,
  kUsage = 64,
};

/// Parses argv (argv[0] is the program name) and runs the subcommand.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace hamrep::cli
