#ifndef MVMIMIC_CLI_HPP
#define MVMIMIC_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace mvmimic::cli {

/// Exit statuses shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kIo = 2,
  kNumerical = 3,
  kVerificationFailed = 4,
};

/// Runs one command line (without the program name). Machine-readable output
/// goes to `out`, diagnostics and human summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvmimic::cli

#endif  // MVMIMIC_CLI_HPP
