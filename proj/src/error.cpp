#include "winnower/error.hpp"

namespace winnower {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kConflict:
      return "conflict";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kState:
      return "state";
    case ErrorCode::kLocked:
      return "locked";
    case ErrorCode::kInternal:
      return "internal";
  }
  return "internal";
}

}  // namespace winnower
