#pragma once

#include <stdexcept>
#include <string>

namespace winnower {

enum class ErrorCode {
  kInvalidArgument = 1,
  kNotFound = 2,
  kConflict = 3,
  kIo = 4,
  kParse = 5,
  kState = 6,
  kLocked = 7,
  kInternal = 8,
};

const char* error_code_name(ErrorCode code);

// Every failure raised by the core carries a code so that the C API and the
// HTTP layer can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace winnower
