#ifndef PFTPHA_CLI_H_
#define PFTPHA_CLI_H_

#include <iosfwd>

namespace pftpha::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalid = 1,   // bad model, bad flags, or a failed validation
  kAnalysis = 2,  // search, domain or oracle failure
  kIo = 3,
};

/// Runs one command line. Results go to `out` (or the --output file),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pftpha::cli

#endif  // PFTPHA_CLI_H_
