#include "bwedge/error.hpp"

namespace bwedge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IllegalParameter: return "IllegalParameter";
    case ErrorCode::DegenerateDistribution: return "DegenerateDistribution";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::NoClosedFormOracle: return "NoClosedFormOracle";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace bwedge
