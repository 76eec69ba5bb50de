#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mixid {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInvalidInput = 2,
  kExitResourceCap = 3,
};

// Runs one command line (argv[0] is the program name). JSON goes to `out`
// unless -o is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mixid
