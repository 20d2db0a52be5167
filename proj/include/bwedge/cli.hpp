#pragma once

#include <iosfwd>

namespace bwedge::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfigError = 2,
  kIoError = 3,
  kDomainError = 4,
  kInvariantFailure = 5,
};

/// Parses argv, runs one subcommand and writes artifacts. Tables go to `out`
/// when no --out is given; summaries and diagnostics go to `err`. Safe to call
/// concurrently: no state survives the call.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bwedge::cli
