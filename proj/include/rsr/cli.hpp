// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsr::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerifyMismatch = 1,
  kUsageError = 2,
  kIoError = 3,
};

/// Runs the command line `args`; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rsr::cli
