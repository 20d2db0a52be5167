#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bwedge {

enum class ErrorCode {
  IllegalParameter,
  DegenerateDistribution,
  UnsupportedOrder,
  NoClosedFormOracle,
  IndexOutOfRange,
  EmptySupport,
  UnsupportedFamily,
  GridMismatch,
  EmptySample,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for every domain failure; the code identifies the
/// failure class so callers (the CLI in particular) can map it to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace bwedge
