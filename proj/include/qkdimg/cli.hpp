#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qkdimg::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  /// `qkd` finished but the agreement test flagged an eavesdropper.
  kExitEavesdropDetected = 3,
  /// `demo-message` round trip did not reproduce the plaintext.
  kExitDecryptionFailed = 4,
};

/// Runs one subcommand. `args` excludes the program name. Failures print a
/// single "error: <category>: <message>" line to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qkdimg::cli
